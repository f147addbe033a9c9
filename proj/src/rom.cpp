// Copyright (c) 2026 The eksmor authors
// SPDX-License-Identifier: Apache-2.0
#include "eksmor/rom.hpp"

#include <cmath>

#include "eksmor/errors.hpp"

namespace eksmor {

HsvSpectrum::HsvSpectrum(Eigen::VectorXd sigma_descending) : sigma_(std::move(sigma_descending)) {
    const Eigen::Index k = sigma_.size();
    for (Eigen::Index i = 0; i < k; ++i) {
        if (!std::isfinite(sigma_(i)) || sigma_(i) < 0)
            throw ValidationError("invalid_spectrum", "singular values must be finite and >= 0");
        if (i > 0 && sigma_(i) > sigma_(i - 1))
            throw ValidationError("invalid_spectrum", "singular values must be descending");
    }
    tail2_.resize(k + 1);
    tail2_(k) = 0;
    for (Eigen::Index r = k - 1; r >= 0; --r) tail2_(r) = tail2_(r + 1) + 2.0 * sigma_(r);
}

double HsvSpectrum::bound(Eigen::Index r) const {
    if (r < 0 || r > size())
        throw ValidationError("invalid_order", "truncation order outside [0, " +
                                                   std::to_string(size()) + "]");
    return tail2_(r);
}

Eigen::Index HsvSpectrum::select_order(double eps) const {
    if (eps < 0) throw ValidationError("invalid_tolerance", "tolerance must be >= 0");
    for (Eigen::Index r = 1; r <= size(); ++r)
        if (bound(r) <= eps) return r;
    return size();
}

ReductionTarget ReductionTarget::order(Eigen::Index r) {
    if (r < 1) throw ValidationError("invalid_order", "reduced order must be >= 1");
    ReductionTarget t;
    t.r_ = r;
    return t;
}

ReductionTarget ReductionTarget::tolerance(double eps) {
    if (eps < 0) throw ValidationError("invalid_tolerance", "tolerance must be >= 0");
    ReductionTarget t;
    t.eps_ = eps;
    return t;
}

ReductionTarget ReductionTarget::automatic() { return ReductionTarget{}; }

Eigen::Index ReductionTarget::resolve(const HsvSpectrum& hsv, Eigen::Index rank,
                                      std::vector<std::string>& warnings) const {
    if (rank < 1) throw NumericalError("rank_zero", "Gramian factor product has rank zero");
    Eigen::Index r;
    if (has_order()) {
        r = r_;
    } else {
        const double eps = has_tolerance() ? eps_ : 1e-6 * hsv.bound(0);
        r = hsv.select_order(eps);
    }
    if (r > rank) {
        warnings.push_back("requested order " + std::to_string(r) +
                           " exceeds the numerical rank " + std::to_string(rank) +
                           "; reduced to the rank");
        r = rank;
    }
    return r;
}

}  // namespace eksmor
