// Copyright (c) 2026 The eksmor authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "eksmor/descriptor_system.hpp"
#include "eksmor/rom.hpp"

namespace eksmor {

/// Writes <dir>/<name>.json naming four coordinate-format matrix files
/// (<name>_G.mtx, ...) plus port names and the node/branch split.
void save_system(const DescriptorSystem& sys, const std::string& dir,
                 const std::string& name = "system");

/// Loads a system from a JSON manifest {"files": {"G": ..., "C": ..., "B":
/// ..., "L": ...}, "ports": [...], optional "nodes"/"branches" split}. File
/// paths resolve relative to the manifest. Validates dimensions and C
/// symmetry; violations are errors, not warnings. Reduced-model manifests
/// load too (the extra keys are ignored).
DescriptorSystem load_system(const std::string& manifest_path);

/// Writes <dir>/<name>.json plus dense coordinate listings of the four
/// reduced matrices. The manifest carries order, ports, hsv, error_bound and
/// the solver provenance, and is itself loadable by load_system.
void export_rom(const ReducedOrderModel& rom, const std::string& dir,
                const std::string& name = "rom");

/// Reads back a manifest written by export_rom.
ReducedOrderModel load_rom(const std::string& manifest_path);

}  // namespace eksmor
