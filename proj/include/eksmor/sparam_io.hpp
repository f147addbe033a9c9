// Copyright (c) 2026 The eksmor authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "eksmor/freqresp.hpp"

namespace eksmor {

/// CSV with header `freq_hz,S11_re,S11_im,S12_re,...` row-major over ports.
void write_sparams_csv(const std::string& path, const SParamSet& s);

/// Touchstone v1: option line `# HZ S RI R <z0>`, 2-port data in the
/// S11 S21 S12 S22 column order, larger networks one matrix row per line
/// wrapped at four complex pairs.
void write_touchstone(const std::string& path, const SParamSet& s);

/// ".s<n>p"
std::string touchstone_extension(Eigen::Index nports);

}  // namespace eksmor
