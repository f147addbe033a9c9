// Copyright (c) 2026 The eksmor authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include "eksmor/descriptor_system.hpp"
#include "eksmor/eks.hpp"
#include "eksmor/rom.hpp"

namespace eksmor {

struct SquareRootBtResult {
    ReducedOrderModel rom;
    BalancingTransform transform;
};

/// Square-root balanced truncation from Gramian factors P ~= Zp Zp^T and
/// Q ~= Zq Zq^T:
///   Zq^T Zp = U S V^T,
///   T      = S_r^{-1/2} U_r^T Zq^T,
///   T_inv  = Zp V_r S_r^{-1/2},
///   (G~, C~, B~, L~) = (T G T_inv, T C T_inv, T B, L T_inv).
/// The attached spectrum and bound cover the available singular values only,
/// a lower estimate of the true tail when the factors are truncated.
SquareRootBtResult square_root_bt(const Eigen::Ref<const Eigen::MatrixXd>& Zp,
                                  const Eigen::Ref<const Eigen::MatrixXd>& Zq,
                                  const DescriptorSystem& sys, const ReductionTarget& target);

/// Same, carrying the solver provenance of the two factors into the model.
SquareRootBtResult square_root_bt(const LowRankFactor& zp, const LowRankFactor& zq,
                                  const DescriptorSystem& sys, const ReductionTarget& target,
                                  double tol = 0);

/// 2 * (sigma_{r+1} + ... + sigma_k)
double rom_error_bound(const HsvSpectrum& hsv, Eigen::Index r);

}  // namespace eksmor
