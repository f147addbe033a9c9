// Copyright (c) 2026 The eksmor authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <string>
#include <vector>

#include "eksmor/descriptor_system.hpp"
#include "eksmor/element_list.hpp"

namespace eksmor {

/// State numbering shared by all stamps: non-ground nodes first (by first
/// appearance), then inductive branches (in declaration order).
struct MnaNumbering {
    std::vector<std::string> nodes;
    std::vector<std::string> branches;
};

MnaNumbering derive_numbering(const ElementList& elems);

/// Raw stamped MNA blocks before any regularization or validity checks.
/// Stamping is additive: disjoint element sets on the same numbering stamp
/// to the entrywise sum.
struct MnaStamps {
    SpMat Gn;           // n x n node conductances
    SpMat Cn;           // n x n node capacitances
    Eigen::MatrixXd M;  // m x m branch self + mutual inductances
    SpMat E;            // n x m incidence, +1 at node_a, -1 at node_b
    SpMat B1;           // n x p unit current injection per port
};

MnaStamps stamp_elements(const ElementList& elems, const MnaNumbering& numbering);

struct AssemblyOptions {
    /// Capacitance stamped at every node lacking a capacitive path to ground
    /// so that Cn stays positive definite. 0 disables the regularization, in
    /// which case assembly fails on such nodes with a diagnostic listing them.
    double grounding_capacitance = 1e-18;
};

/// Builds the descriptor system
///   G = -[[Gn, E], [-E^T, 0]],  C = blkdiag(Cn, M),  B = [B1; 0],  L = B^T
/// with q = p (symmetric ports). Throws ValidationError for broken element
/// invariants and NumericalError for singular Cn or non-positive-definite M.
DescriptorSystem assemble_mna(const ElementList& elems, const AssemblyOptions& opts = {});

}  // namespace eksmor
