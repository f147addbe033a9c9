// Copyright (c) 2026 The eksmor authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include "eksmor/descriptor_system.hpp"
#include "eksmor/rom.hpp"

namespace eksmor {

/// Controllability / observability Gramians from dense Lyapunov solves,
/// with the relative residual of each solve.
struct DenseGramianPair {
    Eigen::MatrixXd P, Q;
    double residual_p = 0, residual_q = 0;
};

struct DenseBtOptions {
    /// Dense solves are O(N^3); refuse above this order.
    Eigen::Index order_cap = 2000;
    /// Required relative residual of both Gramian solves.
    double residual_tolerance = 1e-10;
};

/// Solves  A P + P A^T = -(C^{-1}B)(C^{-1}B)^T  and
///         A^T Q + Q A = -L^T L                with A = C^{-1}G.
/// Throws NumericalError on singular C, unstable A, exceeded cap, or a
/// residual above the tolerance.
DenseGramianPair gramians_dense(const DescriptorSystem& sys, const DenseBtOptions& opts = {});

/// sigma_i = sqrt(lambda_i(P Q)), sorted descending; negative round-off
/// eigenvalues clamp to zero.
HsvSpectrum hankel_singular_values(const Eigen::Ref<const Eigen::MatrixXd>& P,
                                   const Eigen::Ref<const Eigen::MatrixXd>& Q);

/// Smallest r >= 1 whose truncation bound meets eps (spectrum length if none).
Eigen::Index select_order(const HsvSpectrum& hsv, double eps);

struct DenseBtResult {
    ReducedOrderModel rom;
    BalancingTransform transform;
    DenseGramianPair gramians;
};

/// Reference square-root balanced truncation pipeline, entirely dense:
/// Gramians -> SVD square roots Z_P, Z_Q -> SVD of Z_Q^T Z_P -> projections
/// -> reduced matrices, with the truncation bound attached.
DenseBtResult balance_truncate_dense(const DescriptorSystem& sys, const ReductionTarget& target,
                                     const DenseBtOptions& opts = {});

}  // namespace eksmor
