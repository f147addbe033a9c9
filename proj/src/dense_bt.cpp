// Copyright (c) 2026 The eksmor authors
// SPDX-License-Identifier: Apache-2.0
#include "eksmor/dense_bt.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "eksmor/errors.hpp"
#include "eksmor/lyapunov.hpp"

namespace eksmor {

namespace {

void check_order_cap(Eigen::Index N, Eigen::Index cap) {
    if (N > cap) {
        std::ostringstream msg;
        msg << "order " << N << " exceeds the dense solve cap " << cap;
        throw NumericalError("cap_exceeded", msg.str());
    }
}

DenseGramianPair solve_gramians(const DenseRealization& d, const DenseBtOptions& opts) {
    DenseGramianPair g;
    g.P = solve_lyapunov_dense(d.A, d.Bc);
    g.residual_p = lyapunov_residual(d.A, g.P, d.Bc);
    const Eigen::MatrixXd Lt = d.L.transpose();
    g.Q = solve_lyapunov_dense(d.A.transpose(), Lt);
    g.residual_q = lyapunov_residual(d.A.transpose(), g.Q, Lt);

    if (g.residual_p > opts.residual_tolerance || g.residual_q > opts.residual_tolerance) {
        std::ostringstream msg;
        msg << "Gramian solve residuals " << g.residual_p << " / " << g.residual_q
            << " exceed the tolerance " << opts.residual_tolerance;
        throw NumericalError("residual", msg.str());
    }
    return g;
}

}  // namespace

DenseGramianPair gramians_dense(const DescriptorSystem& sys, const DenseBtOptions& opts) {
    check_order_cap(sys.order(), opts.order_cap);
    return solve_gramians(dense_realization(sys), opts);
}

HsvSpectrum hankel_singular_values(const Eigen::Ref<const Eigen::MatrixXd>& P,
                                   const Eigen::Ref<const Eigen::MatrixXd>& Q) {
    if (P.rows() != P.cols() || Q.rows() != Q.cols() || P.rows() != Q.rows())
        throw ValidationError("invalid_system", "Gramians must be square with equal dimensions");
    Eigen::EigenSolver<Eigen::MatrixXd> es(P * Q, false);
    if (es.info() != Eigen::Success)
        throw NumericalError("eigen", "eigenvalue iteration on P*Q did not converge");
    Eigen::VectorXd lambda = es.eigenvalues().real();
    Eigen::VectorXd sigma(lambda.size());
    for (Eigen::Index i = 0; i < lambda.size(); ++i)
        sigma(i) = lambda(i) > 0 ? std::sqrt(lambda(i)) : 0.0;  // clamp negative round-off
    std::sort(sigma.data(), sigma.data() + sigma.size(), std::greater<double>());
    return HsvSpectrum(std::move(sigma));
}

Eigen::Index select_order(const HsvSpectrum& hsv, double eps) { return hsv.select_order(eps); }

DenseBtResult balance_truncate_dense(const DescriptorSystem& sys, const ReductionTarget& target,
                                     const DenseBtOptions& opts) {
    DenseBtResult result;
    result.gramians = gramians_dense(sys, opts);

    // Square roots of the Gramians from their SVDs.
    Eigen::BDCSVD<Eigen::MatrixXd> svd_p(result.gramians.P, Eigen::ComputeThinU);
    Eigen::BDCSVD<Eigen::MatrixXd> svd_q(result.gramians.Q, Eigen::ComputeThinU);
    const Eigen::MatrixXd Zp =
        svd_p.matrixU() * svd_p.singularValues().cwiseSqrt().asDiagonal();
    const Eigen::MatrixXd Zq =
        svd_q.matrixU() * svd_q.singularValues().cwiseSqrt().asDiagonal();

    Eigen::BDCSVD<Eigen::MatrixXd> svd(Zq.transpose() * Zp,
                                       Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sigma = svd.singularValues();
    HsvSpectrum hsv(sigma);
    Eigen::Index rank = 0;
    while (rank < sigma.size() && sigma(rank) >= 1e-14 * sigma(0)) ++rank;

    ReducedOrderModel& rom = result.rom;
    const Eigen::Index r = target.resolve(hsv, rank, rom.provenance.warnings);

    const Eigen::VectorXd scale = sigma.head(r).cwiseSqrt().cwiseInverse();
    result.transform.T = scale.asDiagonal() * svd.matrixU().leftCols(r).transpose() * Zq.transpose();
    result.transform.T_inv = Zp * svd.matrixV().leftCols(r) * scale.asDiagonal();

    const Eigen::MatrixXd& T = result.transform.T;
    const Eigen::MatrixXd& Ti = result.transform.T_inv;
    rom.G = T * (sys.G * Ti);
    rom.C = T * sys.apply_C(Ti);
    rom.B = T * Eigen::MatrixXd(sys.B);
    rom.L = Eigen::MatrixXd(sys.L) * Ti;
    rom.ports = sys.ports;
    rom.admittance_ports = sys.admittance_ports;
    rom.hsv = std::move(hsv);
    rom.error_bound = rom.hsv.bound(r);
    rom.provenance.method = "dense";
    rom.provenance.residual_p = result.gramians.residual_p;
    rom.provenance.residual_q = result.gramians.residual_q;

    Eigen::FullPivLU<Eigen::MatrixXd> lu(rom.C);
    if (!lu.isInvertible())
        throw NumericalError("singular_c", "reduced C is singular in balanced coordinates");
    return result;
}

}  // namespace eksmor
