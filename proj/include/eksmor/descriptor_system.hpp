// Copyright (c) 2026 The eksmor authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <string>
#include <vector>

namespace eksmor {

using SpMat = Eigen::SparseMatrix<double>;

/// Descriptor state-space model  C dx/dt = G x + B u,  y = L x.
///
/// States are node voltages followed by inductive branch currents, so C is
/// block diagonal: a sparse node capacitance block Cn (n x n) and a branch
/// inductance block M (m x m) kept in dense storage because mutual couplings
/// fill it in. Systems loaded from raw matrix files without a node/branch
/// split carry everything in Cn (m = 0).
struct DescriptorSystem {
    SpMat G;            // N x N, sign convention: passive nets give stable C^{-1}G
    SpMat Cn;           // n x n node capacitance block
    Eigen::MatrixXd M;  // m x m branch inductance block
    SpMat B;            // N x p input map
    SpMat L;            // q x N output map
    std::vector<std::string> ports;
    /// True when ports are current-driven / voltage-observed with L = B^T,
    /// which makes H(s) an admittance matrix.
    bool admittance_ports = false;

    Eigen::Index nodes() const { return Cn.rows(); }
    Eigen::Index branches() const { return M.rows(); }
    Eigen::Index order() const { return nodes() + branches(); }
    Eigen::Index inputs() const { return B.cols(); }
    Eigen::Index outputs() const { return L.rows(); }

    /// Assembled N x N sparse C (Cn plus the nonzeros of M).
    SpMat C() const;

    /// True when L equals B^T entrywise.
    bool has_symmetric_ports() const;

    /// C * x using the block split, without materializing the assembled C.
    Eigen::MatrixXd apply_C(const Eigen::Ref<const Eigen::MatrixXd>& x) const;

    /// Dimension and finiteness violations; empty when consistent. These are
    /// the requirements every evaluator and solver needs.
    std::vector<std::string> check_dimensions() const;

    /// check_dimensions plus the MNA-shape contract: Cn and M symmetric
    /// within sym_tol of their magnitude. Reduced models loaded back as
    /// systems legitimately break the symmetry (balanced coordinates), so
    /// this stricter check applies to raw system ingest and validation.
    std::vector<std::string> check_structure(double sym_tol = 1e-12) const;

    /// Numerical invariant checks: Cn and M positive definite, symmetric part
    /// of the node conductance block positive semidefinite, zero rows/columns
    /// of B/L beyond the node block, and (for order() <= stability_cap) an
    /// eigenvalue stability check of C^{-1}G. Desk-scale only.
    std::vector<std::string> check_numerics(Eigen::Index stability_cap = 2000) const;

    /// Throws ValidationError on the first check_dimensions violation.
    void validate() const;
};

/// Dense materialization of C^{-1}G and C^{-1}B; used by the dense pipeline
/// and test oracles. Throws NumericalError("singular_c") when C is singular.
struct DenseRealization {
    Eigen::MatrixXd A;   // C^{-1} G
    Eigen::MatrixXd Bc;  // C^{-1} B
    Eigen::MatrixXd L;
};
DenseRealization dense_realization(const DescriptorSystem& sys);

}  // namespace eksmor
