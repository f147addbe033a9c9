// Copyright (c) 2026 The eksmor authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <string>

#include "eksmor/descriptor_system.hpp"

namespace eksmor {

/// Reads a coordinate-format real matrix ("%%MatrixMarket matrix coordinate
/// real general|symmetric", 1-based indices). Symmetric files are expanded.
SpMat read_matrix_market(const std::string& path);

/// Writes the stored entries in coordinate format, `%.17g` so doubles
/// round-trip bit-exactly through the text form.
void write_matrix_market(const std::string& path, const SpMat& m);

/// Dense matrices are written as full coordinate listings (every entry).
void write_matrix_market(const std::string& path, const Eigen::MatrixXd& m);

}  // namespace eksmor
