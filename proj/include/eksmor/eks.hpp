// Copyright (c) 2026 The eksmor authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <vector>

#include "eksmor/descriptor_system.hpp"

namespace eksmor {

enum class GramianSide { controllability, observability };

/// Directional actions of A = C^{-1}G (controllability) or A = (C^{-1}G)^T
/// (observability) together with the matching right-hand-side block, all
/// implemented as linear solves against factorizations of C and G computed
/// once at construction. Immutable after construction and therefore safe to
/// share across threads.
///
/// When C is positive definite the operator also carries the congruence
/// standard form A_hat = S^{-1} G S^{-T} with C = S S^T from the Cholesky
/// factor. A_hat has the same spectrum as C^{-1}G but its numerical range
/// lies in the closed left half-plane for passive models, so Krylov
/// projections of it stay stable; the iteration runs there and low-rank
/// factors map back through S. With an indefinite C the whitened actions
/// fall back to C^{-1}G itself.
class SystemOperator {
public:
    SystemOperator(const DescriptorSystem& sys, GramianSide side);

    Eigen::Index order() const;
    Eigen::Index block_width() const { return rhs_.cols(); }
    GramianSide side() const { return side_; }

    /// C^{-1}B on the controllability side, L^T on the observability side.
    const Eigen::MatrixXd& rhs_block() const { return rhs_; }

    Eigen::MatrixXd apply(const Eigen::Ref<const Eigen::MatrixXd>& x) const;
    Eigen::MatrixXd apply_inverse(const Eigen::Ref<const Eigen::MatrixXd>& x) const;

    /// True when the iteration runs on the Cholesky standard form.
    bool whitened() const;
    /// S^{-1}B (controllability) or S^{-1}L^T (observability).
    const Eigen::MatrixXd& whitened_rhs() const { return whitened_rhs_; }
    Eigen::MatrixXd whitened_apply(const Eigen::Ref<const Eigen::MatrixXd>& x) const;
    Eigen::MatrixXd whitened_apply_inverse(const Eigen::Ref<const Eigen::MatrixXd>& x) const;
    /// Maps a factor of the whitened Gramian back to original coordinates:
    /// S^{-T} Z (controllability) or S Z (observability).
    Eigen::MatrixXd unwhiten_factor(const Eigen::Ref<const Eigen::MatrixXd>& z) const;

private:
    struct Factors;
    std::shared_ptr<const Factors> factors_;
    GramianSide side_;
    Eigen::MatrixXd rhs_;
    Eigen::MatrixXd whitened_rhs_;
};

inline SystemOperator build_operator(const DescriptorSystem& sys, GramianSide side) {
    return SystemOperator(sys, side);
}

/// Growing orthonormal basis of the extended Krylov subspace
///   span{B, A^{-1}B, A B, A^{-2}B, A^2 B, ...}
/// of the operator's working (whitened) realization, with the projected
/// matrices maintained incrementally.
struct EksState {
    Eigen::MatrixXd basis;          // K, N x k, orthonormal columns
    Eigen::MatrixXd a_basis;        // A * K, cached for projection and residuals
    Eigen::MatrixXd projected_a;    // K^T A K
    Eigen::MatrixXd projected_rhs;  // K^T rhs
    int iteration = 0;              // j
    int deflations = 0;             // columns dropped so far
    std::vector<double> residual_history;

    // Column ranges in `basis` of the newest block's two chains: directions
    // produced by A (forward) and by A^{-1} (inverse). The next extension
    // continues each chain from these.
    Eigen::Index fwd_begin = 0, fwd_end = 0;
    Eigen::Index inv_begin = 0, inv_end = 0;

    Eigen::Index dimension() const { return basis.cols(); }
};

/// First block: orthonormal span of [rhs, A^{-1} rhs]. Throws
/// NumericalError("no_excitation") when the right-hand side is zero.
EksState initialize_basis(const SystemOperator& op);

/// Appends the next block (A applied to the forward chain, A^{-1} to the
/// inverse chain), re-orthogonalized and deflated. Returns false when every
/// new direction deflated away (the subspace is invariant; treat as a final
/// convergence check).
bool extend_basis(EksState& state, const SystemOperator& op);

/// Solves the projected equation
///   (K^T A K) X + X (K^T A K)^T = -(K^T rhs)(K^T rhs)^T
/// by the dense Bartels-Stewart solver. An unstable projection raises
/// NumericalError("unstable") carrying the iteration number.
Eigen::MatrixXd project_and_solve(const EksState& state);

/// Relative residual of the back-projected solution K X K^T in the full
/// equation of the working realization, evaluated in factored form (no
/// N x N matrix is formed):
///   ||A KXK^T + KXK^T A^T + rhs rhs^T||_F / ||rhs rhs^T||_F
/// The value is independent of which square root of C defines the
/// whitening.
double residual_norm(const EksState& state, const Eigen::Ref<const Eigen::MatrixXd>& X,
                     const SystemOperator& op);

/// Low-rank Gramian factor Z with P ~= Z Z^T.
struct LowRankFactor {
    Eigen::MatrixXd Z;
    Eigen::VectorXd sigma;  // retained singular values of the projected solution
    int iterations = 0;
    double residual = 0;
    bool converged = false;
    int deflations = 0;
    std::vector<double> residual_history;

    Eigen::Index rank() const { return Z.cols(); }
};

struct EksOptions {
    double tol = 1e-10;
    int max_iterations = 100;
    /// Retained singular values of the projected solution: sigma_i >= cutoff * sigma_max.
    double svd_cutoff = 1e-12;
    /// Called once per iteration with (iteration, basis columns, residual).
    std::function<void(int, Eigen::Index, double)> progress;
};

/// Full extended-Krylov solve loop: extend, project, solve, check residual;
/// extract Z = K U Sigma^{1/2} from the SVD of the projected solution on
/// convergence. Exhausting max_iterations (or complete deflation before the
/// tolerance is met) returns the last factor flagged `converged = false`.
LowRankFactor eksm_solve(const SystemOperator& op, const EksOptions& opts = {});
LowRankFactor eksm_solve(const DescriptorSystem& sys, GramianSide side, const EksOptions& opts = {});

}  // namespace eksmor
