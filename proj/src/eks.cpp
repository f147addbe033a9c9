// Copyright (c) 2026 The eksmor authors
// SPDX-License-Identifier: Apache-2.0
#include "eksmor/eks.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SVD>
#include <Eigen/SparseLU>

#include <cmath>
#include <sstream>

#include "eksmor/errors.hpp"
#include "eksmor/lyapunov.hpp"

namespace eksmor {

namespace {

double sparse_max_abs(const SpMat& m) {
    double v = 0;
    for (Eigen::Index c = 0; c < m.outerSize(); ++c)
        for (SpMat::InnerIterator it(m, c); it; ++it) v = std::max(v, std::abs(it.value()));
    return v;
}

// Deflation threshold: drop a column when orthogonalization reduces its norm
// below this fraction of the pre-orthogonalization norm.
constexpr double kDeflationTol = 1e-10;

// Classical block Gram-Schmidt against `K` with one re-orthogonalization
// pass, followed by column-wise orthonormalization (two passes as well)
// with deflation of dependent columns. Returns the accepted columns.
Eigen::MatrixXd orthonormalize_against(const Eigen::MatrixXd& K, Eigen::MatrixXd W,
                                       int& deflations) {
    if (W.cols() == 0) return W;
    const Eigen::VectorXd pre_norms = W.colwise().norm();
    if (K.cols() > 0)
        for (int pass = 0; pass < 2; ++pass) W.noalias() -= K * (K.transpose() * W);

    Eigen::MatrixXd accepted(W.rows(), W.cols());
    Eigen::Index kept = 0;
    for (Eigen::Index i = 0; i < W.cols(); ++i) {
        Eigen::VectorXd v = W.col(i);
        for (int pass = 0; pass < 2; ++pass)
            if (kept > 0)
                v.noalias() -= accepted.leftCols(kept) * (accepted.leftCols(kept).transpose() * v);
        const double norm = v.norm();
        if (norm <= kDeflationTol * pre_norms(i) || pre_norms(i) == 0.0) {
            ++deflations;
            continue;
        }
        accepted.col(kept++) = v / norm;
    }
    accepted.conservativeResize(Eigen::NoChange, kept);
    return accepted;
}

}  // namespace

struct SystemOperator::Factors {
    // mutable: SparseLU::transpose() is not const-qualified in Eigen 3.4
    // although the transpose solve only reads the factorization.
    mutable Eigen::SparseLU<SpMat> g_lu;

    // C is factored through its block-diagonal split: sparse Cholesky for
    // the node block, a dense kernel for the branch inductance block. The
    // Cholesky factors double as the whitening transform S (C = S S^T with
    // S = blkdiag(Pn^T Ln, Lm)). A non-SPD C falls back to LDLT and then to
    // a general sparse LU, without a whitened form.
    Eigen::SimplicialLLT<SpMat> cn_llt;
    Eigen::LLT<Eigen::MatrixXd> m_llt;
    Eigen::SimplicialLDLT<SpMat> cn_ldlt;
    Eigen::SparseLU<SpMat> c_lu;
    enum class CKind { cholesky, block_ldlt, lu } c_kind = CKind::lu;
    Eigen::Index n = 0, m = 0;

    SpMat G, C;  // retained for products

    bool whitened() const { return c_kind == CKind::cholesky; }

    Eigen::MatrixXd solve_C(const Eigen::Ref<const Eigen::MatrixXd>& x) const {
        switch (c_kind) {
            case CKind::cholesky:
                return mult_s_invt(mult_s_inv(x));
            case CKind::block_ldlt: {
                Eigen::MatrixXd y(x.rows(), x.cols());
                y.topRows(n) = cn_ldlt.solve(x.topRows(n));
                if (m > 0) y.bottomRows(m) = m_llt.solve(x.bottomRows(m));
                return y;
            }
            case CKind::lu:
                return c_lu.solve(x);
        }
        return {};
    }

    // S v, S^T v, S^{-1} v, S^{-T} v through the permuted Cholesky factors.
    Eigen::MatrixXd mult_s(const Eigen::Ref<const Eigen::MatrixXd>& x) const {
        Eigen::MatrixXd y(x.rows(), x.cols());
        if (n > 0)
            y.topRows(n) = cn_llt.permutationPinv() *
                           Eigen::MatrixXd(cn_llt.matrixL() * x.topRows(n));
        if (m > 0) y.bottomRows(m) = m_llt.matrixL() * x.bottomRows(m);
        return y;
    }
    Eigen::MatrixXd mult_st(const Eigen::Ref<const Eigen::MatrixXd>& x) const {
        Eigen::MatrixXd y(x.rows(), x.cols());
        if (n > 0)
            y.topRows(n) = cn_llt.matrixU() * Eigen::MatrixXd(cn_llt.permutationP() * x.topRows(n));
        if (m > 0) y.bottomRows(m) = m_llt.matrixU() * x.bottomRows(m);
        return y;
    }
    Eigen::MatrixXd mult_s_inv(const Eigen::Ref<const Eigen::MatrixXd>& x) const {
        Eigen::MatrixXd y(x.rows(), x.cols());
        if (n > 0)
            y.topRows(n) = cn_llt.matrixL().solve(
                Eigen::MatrixXd(cn_llt.permutationP() * x.topRows(n)));
        if (m > 0) y.bottomRows(m) = m_llt.matrixL().solve(x.bottomRows(m));
        return y;
    }
    Eigen::MatrixXd mult_s_invt(const Eigen::Ref<const Eigen::MatrixXd>& x) const {
        Eigen::MatrixXd y(x.rows(), x.cols());
        if (n > 0)
            y.topRows(n) = cn_llt.permutationPinv() *
                           Eigen::MatrixXd(cn_llt.matrixU().solve(x.topRows(n)));
        if (m > 0) y.bottomRows(m) = m_llt.matrixU().solve(x.bottomRows(m));
        return y;
    }
};

SystemOperator::SystemOperator(const DescriptorSystem& sys, GramianSide side) : side_(side) {
    sys.validate();
    auto f = std::make_shared<Factors>();
    f->n = sys.nodes();
    f->m = sys.branches();
    f->G = sys.G;
    f->G.makeCompressed();
    f->C = sys.C();
    f->C.makeCompressed();

    const double g_scale = sparse_max_abs(f->G);
    const double c_scale = sparse_max_abs(f->C);
    if (g_scale == 0) throw NumericalError("singular_g", "G is numerically singular");
    if (c_scale == 0) throw NumericalError("singular_c", "C is numerically singular");

    f->g_lu.compute(f->G);
    if (f->g_lu.info() != Eigen::Success)
        throw NumericalError("singular_g", "sparse factorization of G failed: G is singular");

    f->c_kind = Factors::CKind::cholesky;
    if (f->n > 0) {
        f->cn_llt.compute(sys.Cn);
        if (f->cn_llt.info() != Eigen::Success) f->c_kind = Factors::CKind::lu;
    }
    if (f->m > 0) {
        f->m_llt.compute(sys.M);
        if (f->m_llt.info() != Eigen::Success) f->c_kind = Factors::CKind::lu;
    }
    if (f->c_kind == Factors::CKind::cholesky) {
        // Guard against a silently inaccurate Cholesky near semidefiniteness.
        Eigen::VectorXd probe = Eigen::VectorXd::LinSpaced(sys.order(), 1.0, 2.0);
        Eigen::VectorXd back = f->C * f->solve_C(probe);
        if (!back.allFinite() || (back - probe).norm() > 1e-8 * probe.norm())
            f->c_kind = Factors::CKind::lu;
    }
    if (f->c_kind != Factors::CKind::cholesky) {
        // Indefinite but symmetric C: block LDLT, then general sparse LU.
        f->c_kind = Factors::CKind::block_ldlt;
        if (f->n > 0) {
            f->cn_ldlt.compute(sys.Cn);
            if (f->cn_ldlt.info() != Eigen::Success)
                f->c_kind = Factors::CKind::lu;
            else {
                const Eigen::VectorXd d = f->cn_ldlt.vectorD().cwiseAbs();
                if (d.minCoeff() <= 1e-14 * d.maxCoeff()) f->c_kind = Factors::CKind::lu;
            }
        }
        if (f->c_kind == Factors::CKind::block_ldlt && f->m > 0 &&
            f->m_llt.info() != Eigen::Success)
            f->c_kind = Factors::CKind::lu;
        if (f->c_kind == Factors::CKind::block_ldlt) {
            Eigen::VectorXd probe = Eigen::VectorXd::LinSpaced(sys.order(), 1.0, 2.0);
            Eigen::VectorXd back = f->C * f->solve_C(probe);
            if (!back.allFinite() || (back - probe).norm() > 1e-8 * probe.norm())
                f->c_kind = Factors::CKind::lu;
        }
        if (f->c_kind == Factors::CKind::lu) {
            f->c_lu.compute(f->C);
            if (f->c_lu.info() != Eigen::Success)
                throw NumericalError("singular_c",
                                     "sparse factorization of C failed: C is singular");
        }
    }

    factors_ = f;
    if (side == GramianSide::controllability) {
        rhs_ = f->solve_C(Eigen::MatrixXd(sys.B));
        whitened_rhs_ = f->whitened() ? f->mult_s_inv(Eigen::MatrixXd(sys.B)) : rhs_;
    } else {
        rhs_ = Eigen::MatrixXd(SpMat(sys.L.transpose()));
        whitened_rhs_ = f->whitened() ? f->mult_s_inv(rhs_) : rhs_;
    }
}

Eigen::Index SystemOperator::order() const { return factors_->G.rows(); }

bool SystemOperator::whitened() const { return factors_->whitened(); }

Eigen::MatrixXd SystemOperator::apply(const Eigen::Ref<const Eigen::MatrixXd>& x) const {
    const Factors& f = *factors_;
    if (side_ == GramianSide::controllability) return f.solve_C(f.G * x);
    return f.G.transpose() * f.solve_C(x);
}

Eigen::MatrixXd SystemOperator::apply_inverse(const Eigen::Ref<const Eigen::MatrixXd>& x) const {
    const Factors& f = *factors_;
    if (side_ == GramianSide::controllability) return f.g_lu.solve(f.C * x);
    return f.C * f.g_lu.transpose().solve(x);
}

Eigen::MatrixXd SystemOperator::whitened_apply(const Eigen::Ref<const Eigen::MatrixXd>& x) const {
    const Factors& f = *factors_;
    if (!f.whitened()) return apply(x);
    // A_hat = S^{-1} G S^{-T}; the observability side applies its transpose.
    if (side_ == GramianSide::controllability) return f.mult_s_inv(f.G * f.mult_s_invt(x));
    return f.mult_s_inv(f.G.transpose() * f.mult_s_invt(x));
}

Eigen::MatrixXd SystemOperator::whitened_apply_inverse(
    const Eigen::Ref<const Eigen::MatrixXd>& x) const {
    const Factors& f = *factors_;
    if (!f.whitened()) return apply_inverse(x);
    if (side_ == GramianSide::controllability) return f.mult_st(f.g_lu.solve(f.mult_s(x)));
    return f.mult_st(f.g_lu.transpose().solve(f.mult_s(x)));
}

Eigen::MatrixXd SystemOperator::unwhiten_factor(
    const Eigen::Ref<const Eigen::MatrixXd>& z) const {
    const Factors& f = *factors_;
    if (!f.whitened()) return z;
    // P = S^{-T} P_hat S^{-1} on the controllability side, Q = S Q_hat S^T
    // on the observability side (the output map transforms contravariantly).
    if (side_ == GramianSide::controllability) return f.mult_s_invt(z);
    return f.mult_s(z);
}

EksState initialize_basis(const SystemOperator& op) {
    const Eigen::MatrixXd& rhs = op.whitened_rhs();
    if (rhs.cols() == 0 || rhs.norm() == 0.0)
        throw NumericalError("no_excitation", "right-hand side block is zero: nothing to solve");

    EksState state;
    Eigen::MatrixXd empty(rhs.rows(), 0);
    Eigen::MatrixXd fwd = orthonormalize_against(empty, rhs, state.deflations);
    if (fwd.cols() == 0)
        throw NumericalError("no_excitation", "right-hand side block is numerically zero");
    Eigen::MatrixXd inv =
        orthonormalize_against(fwd, op.whitened_apply_inverse(rhs), state.deflations);

    state.basis.resize(rhs.rows(), fwd.cols() + inv.cols());
    state.basis << fwd, inv;
    state.fwd_begin = 0;
    state.fwd_end = fwd.cols();
    state.inv_begin = fwd.cols();
    state.inv_end = fwd.cols() + inv.cols();
    state.iteration = 1;

    state.a_basis = op.whitened_apply(state.basis);
    state.projected_a = state.basis.transpose() * state.a_basis;
    state.projected_rhs = state.basis.transpose() * rhs;
    return state;
}

bool extend_basis(EksState& state, const SystemOperator& op) {
    const Eigen::Index old_cols = state.basis.cols();

    // Continue the forward chain from the cached A*K columns and the inverse
    // chain with fresh solves.
    Eigen::MatrixXd w_fwd = state.a_basis.middleCols(state.fwd_begin, state.fwd_end - state.fwd_begin);
    Eigen::MatrixXd w_inv(state.basis.rows(), state.inv_end - state.inv_begin);
    if (w_inv.cols() > 0)
        w_inv = op.whitened_apply_inverse(state.basis.middleCols(state.inv_begin, w_inv.cols()));

    Eigen::MatrixXd fwd = orthonormalize_against(state.basis, std::move(w_fwd), state.deflations);
    Eigen::MatrixXd with_fwd(state.basis.rows(), old_cols + fwd.cols());
    with_fwd << state.basis, fwd;
    Eigen::MatrixXd inv = orthonormalize_against(with_fwd, std::move(w_inv), state.deflations);

    const Eigen::Index added = fwd.cols() + inv.cols();
    if (added == 0) return false;  // invariant subspace: nothing new to add

    Eigen::MatrixXd fresh(state.basis.rows(), added);
    fresh << fwd, inv;
    Eigen::MatrixXd a_fresh = op.whitened_apply(fresh);

    state.projected_a.conservativeResize(old_cols + added, old_cols + added);
    state.projected_a.topRightCorner(old_cols, added).noalias() =
        state.basis.transpose() * a_fresh;
    state.projected_a.bottomLeftCorner(added, old_cols).noalias() =
        fresh.transpose() * state.a_basis;
    state.projected_a.bottomRightCorner(added, added).noalias() = fresh.transpose() * a_fresh;

    state.projected_rhs.conservativeResize(old_cols + added, Eigen::NoChange);
    state.projected_rhs.bottomRows(added).noalias() = fresh.transpose() * op.whitened_rhs();

    state.basis.conservativeResize(Eigen::NoChange, old_cols + added);
    state.basis.rightCols(added) = fresh;
    state.a_basis.conservativeResize(Eigen::NoChange, old_cols + added);
    state.a_basis.rightCols(added) = a_fresh;

    state.fwd_begin = old_cols;
    state.fwd_end = old_cols + fwd.cols();
    state.inv_begin = state.fwd_end;
    state.inv_end = old_cols + added;
    ++state.iteration;
    return true;
}

Eigen::MatrixXd project_and_solve(const EksState& state) {
    try {
        return solve_lyapunov_dense(state.projected_a, state.projected_rhs);
    } catch (const NumericalError& e) {
        if (e.code() == "unstable") {
            std::ostringstream msg;
            msg << "projected matrix is unstable at iteration " << state.iteration
                << " (the model is likely non-dissipative): " << e.what();
            throw NumericalError("unstable", msg.str());
        }
        throw;
    }
}

double residual_norm(const EksState& state, const Eigen::Ref<const Eigen::MatrixXd>& X,
                     const SystemOperator& op) {
    // The residual of the back-projected solution factors exactly into thin
    // blocks: with D = A K - K (K^T A K), closure E = Ap X + X Ap^T + Rp Rp^T
    // and b_perp = rhs - K Rp,
    //   R = K (E K^T + (D X)^T) + (D X) K^T
    //       + b_perp rhs^T + rhs b_perp^T - b_perp b_perp^T,
    // so ||R||_F comes from Gram matrices of size O(2k + 3p); every block is
    // of residual magnitude, which keeps the evaluation well conditioned all
    // the way down to round-off level.
    const Eigen::MatrixXd& K = state.basis;
    const Eigen::MatrixXd& rhs = op.whitened_rhs();
    const Eigen::Index k = K.cols();
    const Eigen::Index p = rhs.cols();

    Eigen::MatrixXd D = state.a_basis - K * state.projected_a;
    Eigen::MatrixXd S = D * X;  // N x k
    Eigen::MatrixXd closure = state.projected_a * X + X * state.projected_a.transpose() +
                              state.projected_rhs * state.projected_rhs.transpose();
    Eigen::MatrixXd b_perp = rhs - K * state.projected_rhs;

    Eigen::MatrixXd U(K.rows(), 2 * k + 3 * p);
    U << K, S, b_perp, rhs, -b_perp;
    Eigen::MatrixXd W(K.rows(), 2 * k + 3 * p);
    W << (K * closure + S), K, rhs, b_perp, b_perp;

    const Eigen::MatrixXd gram_u = U.transpose() * U;
    const Eigen::MatrixXd gram_w = W.transpose() * W;
    const double sq = gram_u.cwiseProduct(gram_w).sum();
    const double denom = (rhs.transpose() * rhs).norm();
    return std::sqrt(std::max(sq, 0.0)) / denom;
}

LowRankFactor eksm_solve(const SystemOperator& op, const EksOptions& opts) {
    if (!(opts.tol > 0)) throw ValidationError("invalid_tolerance", "tolerance must be > 0");
    if (opts.max_iterations < 1)
        throw ValidationError("invalid_config", "max_iterations must be >= 1");

    EksState state = initialize_basis(op);
    Eigen::MatrixXd X;
    bool converged = false;
    double residual = 0;
    while (true) {
        X = project_and_solve(state);
        residual = residual_norm(state, X, op);
        state.residual_history.push_back(residual);
        if (opts.progress) opts.progress(state.iteration, state.dimension(), residual);
        if (residual <= opts.tol) {
            converged = true;
            break;
        }
        if (state.iteration >= opts.max_iterations) break;
        if (!extend_basis(state, op)) break;  // stagnated on an invariant subspace
    }

    Eigen::BDCSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinU);
    const Eigen::VectorXd& sv = svd.singularValues();
    Eigen::Index kept = 0;
    while (kept < sv.size() && sv(kept) > opts.svd_cutoff * sv(0)) ++kept;

    LowRankFactor factor;
    factor.Z = op.unwhiten_factor(state.basis * svd.matrixU().leftCols(kept) *
                                  sv.head(kept).cwiseSqrt().asDiagonal());
    factor.sigma = sv.head(kept);
    factor.iterations = state.iteration;
    factor.residual = residual;
    factor.converged = converged;
    factor.deflations = state.deflations;
    factor.residual_history = std::move(state.residual_history);
    return factor;
}

LowRankFactor eksm_solve(const DescriptorSystem& sys, GramianSide side, const EksOptions& opts) {
    return eksm_solve(SystemOperator(sys, side), opts);
}

}  // namespace eksmor
