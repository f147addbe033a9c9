// Copyright (c) 2026 The eksmor authors
// SPDX-License-Identifier: Apache-2.0
#include "eksmor/lyapunov.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>
#include <vector>

#include "eksmor/errors.hpp"

namespace eksmor {

namespace {

// Starting rows of the 1x1 / 2x2 diagonal blocks of a real quasi-triangular
// Schur factor, plus a terminating sentinel.
std::vector<Eigen::Index> schur_blocks(const Eigen::MatrixXd& T) {
    std::vector<Eigen::Index> starts;
    const Eigen::Index k = T.rows();
    Eigen::Index i = 0;
    while (i < k) {
        starts.push_back(i);
        i += (i + 1 < k && T(i + 1, i) != 0.0) ? 2 : 1;
    }
    starts.push_back(k);
    return starts;
}

void require_stable(const Eigen::MatrixXd& T, const std::vector<Eigen::Index>& starts,
                    double margin) {
    for (size_t b = 0; b + 1 < starts.size(); ++b) {
        const Eigen::Index i = starts[b];
        const Eigen::Index size = starts[b + 1] - i;
        const double re = size == 1 ? T(i, i) : 0.5 * (T(i, i) + T(i + 1, i + 1));
        if (re >= -margin) {
            std::ostringstream msg;
            msg << "matrix is not asymptotically stable: eigenvalue with real part " << re
                << " (stability margin " << -margin << ")";
            throw NumericalError("unstable", msg.str());
        }
    }
}

// Solves T Y + Y T^T = F for symmetric Y with T quasi upper triangular,
// sweeping block columns right to left and block rows bottom up within the
// upper triangle; the lower triangle is mirrored as it completes.
Eigen::MatrixXd solve_quasi_triangular(const Eigen::MatrixXd& T, const Eigen::MatrixXd& F) {
    const Eigen::Index k = T.rows();
    const std::vector<Eigen::Index> starts = schur_blocks(T);
    const auto nb = static_cast<Eigen::Index>(starts.size()) - 1;
    Eigen::MatrixXd Y = Eigen::MatrixXd::Zero(k, k);

    for (Eigen::Index bj = nb - 1; bj >= 0; --bj) {
        const Eigen::Index j0 = starts[static_cast<size_t>(bj)];
        const Eigen::Index sj = starts[static_cast<size_t>(bj) + 1] - j0;
        for (Eigen::Index bi = bj; bi >= 0; --bi) {
            const Eigen::Index i0 = starts[static_cast<size_t>(bi)];
            const Eigen::Index si = starts[static_cast<size_t>(bi) + 1] - i0;

            Eigen::MatrixXd rhs = F.block(i0, j0, si, sj);
            const Eigen::Index tail_i = i0 + si;
            if (tail_i < k)
                rhs.noalias() -= T.block(i0, tail_i, si, k - tail_i) *
                                 Y.block(tail_i, j0, k - tail_i, sj);
            const Eigen::Index tail_j = j0 + sj;
            if (tail_j < k)
                rhs.noalias() -= Y.block(i0, tail_j, si, k - tail_j) *
                                 T.block(j0, tail_j, sj, k - tail_j).transpose();

            // Small Sylvester system via its Kronecker form, at most 4x4.
            const Eigen::MatrixXd Tii = T.block(i0, i0, si, si);
            const Eigen::MatrixXd Tjj = T.block(j0, j0, sj, sj);
            Eigen::MatrixXd kron = Eigen::MatrixXd::Zero(si * sj, si * sj);
            for (Eigen::Index c = 0; c < sj; ++c) kron.block(c * si, c * si, si, si) = Tii;
            for (Eigen::Index c = 0; c < sj; ++c)
                for (Eigen::Index r = 0; r < sj; ++r)
                    kron.block(r * si, c * si, si, si).diagonal().array() += Tjj(r, c);
            Eigen::VectorXd vec_rhs(si * sj);
            for (Eigen::Index c = 0; c < sj; ++c) vec_rhs.segment(c * si, si) = rhs.col(c);
            const Eigen::VectorXd sol = kron.fullPivLu().solve(vec_rhs);
            Eigen::MatrixXd block(si, sj);
            for (Eigen::Index c = 0; c < sj; ++c) block.col(c) = sol.segment(c * si, si);

            if (bi == bj) block = 0.5 * (block + block.transpose());
            Y.block(i0, j0, si, sj) = block;
            if (bi != bj) Y.block(j0, i0, sj, si) = block.transpose();
        }
    }
    return Y;
}

}  // namespace

Eigen::MatrixXd solve_lyapunov_dense(const Eigen::Ref<const Eigen::MatrixXd>& A,
                                     const Eigen::Ref<const Eigen::MatrixXd>& W,
                                     double stability_margin_scale) {
    if (A.rows() != A.cols()) throw ValidationError("invalid_system", "A must be square");
    if (W.rows() != A.rows())
        throw ValidationError("invalid_system", "W row count must match the order of A");
    const Eigen::Index k = A.rows();
    if (k == 0) throw ValidationError("invalid_system", "A must have order >= 1");

    Eigen::RealSchur<Eigen::MatrixXd> schur(A);
    if (schur.info() != Eigen::Success)
        throw NumericalError("schur", "real Schur iteration did not converge");
    const Eigen::MatrixXd& T = schur.matrixT();
    const Eigen::MatrixXd& U = schur.matrixU();

    const std::vector<Eigen::Index> starts = schur_blocks(T);
    require_stable(T, starts, stability_margin_scale * A.norm());

    const Eigen::MatrixXd Wt = U.transpose() * W;
    Eigen::MatrixXd F = -Wt * Wt.transpose();
    Eigen::MatrixXd Y = solve_quasi_triangular(T, F);
    Eigen::MatrixXd X = U * Y * U.transpose();
    return 0.5 * (X + X.transpose());
}

double lyapunov_residual(const Eigen::Ref<const Eigen::MatrixXd>& A,
                         const Eigen::Ref<const Eigen::MatrixXd>& X,
                         const Eigen::Ref<const Eigen::MatrixXd>& W) {
    const Eigen::MatrixXd WWt = W * W.transpose();
    return (A * X + X * A.transpose() + WWt).norm() / WWt.norm();
}

}  // namespace eksmor
