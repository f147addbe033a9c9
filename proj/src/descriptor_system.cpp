// Copyright (c) 2026 The eksmor authors
// SPDX-License-Identifier: Apache-2.0
#include "eksmor/descriptor_system.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

#include "eksmor/errors.hpp"

namespace eksmor {

namespace {

double max_abs(const SpMat& m) {
    double v = 0;
    for (Eigen::Index c = 0; c < m.outerSize(); ++c)
        for (SpMat::InnerIterator it(m, c); it; ++it) v = std::max(v, std::abs(it.value()));
    return v;
}

bool all_finite(const SpMat& m) {
    for (Eigen::Index c = 0; c < m.outerSize(); ++c)
        for (SpMat::InnerIterator it(m, c); it; ++it)
            if (!std::isfinite(it.value())) return false;
    return true;
}

}  // namespace

SpMat DescriptorSystem::C() const {
    const Eigen::Index n = nodes();
    const Eigen::Index m = branches();
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(static_cast<size_t>(Cn.nonZeros()) + static_cast<size_t>(m) * static_cast<size_t>(m));
    for (Eigen::Index c = 0; c < n; ++c)
        for (SpMat::InnerIterator it(Cn, c); it; ++it) t.emplace_back(it.row(), c, it.value());
    for (Eigen::Index j = 0; j < m; ++j)
        for (Eigen::Index i = 0; i < m; ++i)
            if (M(i, j) != 0.0) t.emplace_back(n + i, n + j, M(i, j));
    SpMat out(order(), order());
    out.setFromTriplets(t.begin(), t.end());
    return out;
}

Eigen::MatrixXd DescriptorSystem::apply_C(const Eigen::Ref<const Eigen::MatrixXd>& x) const {
    const Eigen::Index n = nodes();
    const Eigen::Index m = branches();
    Eigen::MatrixXd y(order(), x.cols());
    y.topRows(n) = Cn * x.topRows(n);
    if (m > 0) y.bottomRows(m) = M * x.bottomRows(m);
    return y;
}

std::vector<std::string> DescriptorSystem::check_dimensions() const {
    std::vector<std::string> bad;
    const Eigen::Index N = order();
    auto fail = [&](const std::string& msg) { bad.push_back(msg); };

    if (G.rows() != G.cols()) fail("G is not square");
    if (G.rows() != N) fail("G order does not match nodes + branches");
    if (Cn.rows() != Cn.cols()) fail("Cn is not square");
    if (M.rows() != M.cols()) fail("M is not square");
    if (B.rows() != N) fail("B row count does not match the state order");
    if (L.cols() != N) fail("L column count does not match the state order");
    if (!ports.empty() && static_cast<Eigen::Index>(ports.size()) != B.cols())
        fail("port name count does not match the input count");

    if (!all_finite(G)) fail("G has non-finite entries");
    if (!all_finite(Cn)) fail("Cn has non-finite entries");
    if (!all_finite(B)) fail("B has non-finite entries");
    if (!all_finite(L)) fail("L has non-finite entries");
    if (!M.allFinite()) fail("M has non-finite entries");
    return bad;
}

std::vector<std::string> DescriptorSystem::check_structure(double sym_tol) const {
    std::vector<std::string> bad = check_dimensions();
    const double cn_scale = std::max(max_abs(Cn), M.size() > 0 ? M.cwiseAbs().maxCoeff() : 0.0);
    const double tol = sym_tol * std::max(cn_scale, 1e-300);
    SpMat cn_t = SpMat(Cn.transpose());
    if (max_abs(SpMat((Cn - cn_t).pruned())) > tol) bad.push_back("Cn is not symmetric");
    if (M.size() > 0 && (M - M.transpose()).cwiseAbs().maxCoeff() > tol)
        bad.push_back("M is not symmetric");
    return bad;
}

std::vector<std::string> DescriptorSystem::check_numerics(Eigen::Index stability_cap) const {
    std::vector<std::string> bad = check_structure();
    if (!bad.empty()) return bad;  // numerics are meaningless on broken shapes

    const Eigen::Index n = nodes();
    const Eigen::Index m = branches();

    {
        const Eigen::MatrixXd cn_dense(Cn);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cn_dense);
        if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0)
            bad.push_back("Cn is not positive definite");
    }
    if (m > 0) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
        if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0)
            bad.push_back("M is not positive definite");
    }

    // Symmetric part of the node conductance block must be PSD for passivity.
    {
        Eigen::MatrixXd gn = -Eigen::MatrixXd(G).topLeftCorner(n, n);
        Eigen::MatrixXd sym = 0.5 * (gn + gn.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
        const double scale = std::max(sym.cwiseAbs().maxCoeff(), 1e-300);
        if (es.eigenvalues().minCoeff() < -1e-10 * scale)
            bad.push_back("node conductance block is not positive semidefinite");
    }

    if (m > 0) {
        if (max_abs(SpMat(B.bottomRows(m))) != 0)
            bad.push_back("B has nonzero entries in branch rows");
        if (max_abs(SpMat(L.rightCols(m))) != 0)
            bad.push_back("L has nonzero entries in branch columns");
    }

    if (order() <= stability_cap && order() > 0) {
        try {
            DenseRealization d = dense_realization(*this);
            Eigen::VectorXcd eigs = d.A.eigenvalues();
            const double margin = 1e-13 * d.A.norm();
            for (Eigen::Index i = 0; i < eigs.size(); ++i)
                if (eigs(i).real() >= -margin) {
                    std::ostringstream msg;
                    msg << "C^{-1}G has a non-stable eigenvalue at " << eigs(i);
                    bad.push_back(msg.str());
                    break;
                }
        } catch (const Error& e) {
            bad.push_back(e.what());
        }
    }
    return bad;
}

void DescriptorSystem::validate() const {
    auto bad = check_dimensions();
    if (!bad.empty()) throw ValidationError("invalid_system", bad.front());
}

bool DescriptorSystem::has_symmetric_ports() const {
    if (inputs() != outputs()) return false;
    SpMat diff = (SpMat(L.transpose()) - B).pruned();
    return max_abs(diff) == 0.0;
}

DenseRealization dense_realization(const DescriptorSystem& sys) {
    Eigen::MatrixXd c = Eigen::MatrixXd(sys.C());
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(c);
    const Eigen::VectorXd diag = lu.matrixLU().diagonal().cwiseAbs();
    if (diag.size() == 0 || diag.minCoeff() <= 1e-14 * diag.maxCoeff())
        throw NumericalError("singular_c", "C is numerically singular");
    DenseRealization out;
    out.A = lu.solve(Eigen::MatrixXd(sys.G));
    out.Bc = lu.solve(Eigen::MatrixXd(sys.B));
    out.L = Eigen::MatrixXd(sys.L);
    return out;
}

}  // namespace eksmor
