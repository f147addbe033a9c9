// Copyright (c) 2026 The eksmor authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

namespace eksmor {

/// Solves the continuous-time Lyapunov equation
///   A X + X A^T = -W W^T
/// for symmetric positive semidefinite X via the real Schur form of A
/// (Bartels-Stewart). A must be asymptotically stable: any eigenvalue with
/// real part >= -stability_margin_scale * ||A||_F is refused with
/// NumericalError("unstable"). Schur non-convergence raises
/// NumericalError("schur").
Eigen::MatrixXd solve_lyapunov_dense(const Eigen::Ref<const Eigen::MatrixXd>& A,
                                     const Eigen::Ref<const Eigen::MatrixXd>& W,
                                     double stability_margin_scale = 1e-13);

/// ||A X + X A^T + W W^T||_F / ||W W^T||_F
double lyapunov_residual(const Eigen::Ref<const Eigen::MatrixXd>& A,
                         const Eigen::Ref<const Eigen::MatrixXd>& X,
                         const Eigen::Ref<const Eigen::MatrixXd>& W);

}  // namespace eksmor
