// Copyright (c) 2026 The eksmor authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace eksmor {

/// Descending Hankel singular value spectrum with precomputed truncation
/// bounds 2 * sum_{i>r} sigma_i.
class HsvSpectrum {
public:
    HsvSpectrum() = default;
    explicit HsvSpectrum(Eigen::VectorXd sigma_descending);

    const Eigen::VectorXd& values() const { return sigma_; }
    Eigen::Index size() const { return sigma_.size(); }
    bool empty() const { return sigma_.size() == 0; }

    /// 2 * (sigma_{r+1} + ... + sigma_k) for r in [0, size()].
    double bound(Eigen::Index r) const;

    /// Smallest r >= 1 with bound(r) <= eps; size() if none qualifies.
    Eigen::Index select_order(double eps) const;

private:
    Eigen::VectorXd sigma_;
    Eigen::VectorXd tail2_;  // tail2_[r] == bound(r), length size()+1
};

/// How the reduced model was produced; reported in the export manifest.
struct RomProvenance {
    std::string method;  // "dense" or "eksm"
    double tol = 0;
    int iterations_p = 0, iterations_q = 0;
    double residual_p = 0, residual_q = 0;
    bool converged_p = true, converged_q = true;
    int deflations_p = 0, deflations_q = 0;
    std::vector<std::string> warnings;
};

/// Reduced model in the same descriptor form as the original:
///   C~ dx~/dt = G~ x~ + B~ u,  y~ = L~ x~
struct ReducedOrderModel {
    Eigen::MatrixXd G, C;  // r x r
    Eigen::MatrixXd B;     // r x p
    Eigen::MatrixXd L;     // q x r
    std::vector<std::string> ports;
    bool admittance_ports = false;
    HsvSpectrum hsv;
    double error_bound = 0;
    RomProvenance provenance;

    Eigen::Index order() const { return G.rows(); }
    Eigen::Index inputs() const { return B.cols(); }
    Eigen::Index outputs() const { return L.rows(); }
};

/// Row/column projections of the balancing state transformation.
/// T * T_inv == I_r up to round-off (bi-orthogonality).
struct BalancingTransform {
    Eigen::MatrixXd T;      // r x N
    Eigen::MatrixXd T_inv;  // N x r
};

/// Reduction target: an explicit order, an error tolerance for the
/// truncation bound, or automatic (relative bound 1e-6 of the total).
struct ReductionTarget {
    static ReductionTarget order(Eigen::Index r);
    static ReductionTarget tolerance(double eps);
    static ReductionTarget automatic();

    bool has_order() const { return r_ >= 1; }
    bool has_tolerance() const { return eps_ >= 0; }
    Eigen::Index requested_order() const { return r_; }
    double requested_tolerance() const { return eps_; }

    /// Applies the precedence rules (explicit order wins over tolerance)
    /// against an available spectrum and its numerical rank. Appends a
    /// warning when a requested order had to be clamped to the rank.
    Eigen::Index resolve(const HsvSpectrum& hsv, Eigen::Index rank,
                         std::vector<std::string>& warnings) const;

private:
    Eigen::Index r_ = 0;
    double eps_ = -1;
};

}  // namespace eksmor
