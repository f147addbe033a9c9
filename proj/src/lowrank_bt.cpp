// Copyright (c) 2026 The eksmor authors
// SPDX-License-Identifier: Apache-2.0
#include "eksmor/lowrank_bt.hpp"

#include <Eigen/SVD>

#include <cmath>

#include "eksmor/errors.hpp"

namespace eksmor {

SquareRootBtResult square_root_bt(const Eigen::Ref<const Eigen::MatrixXd>& Zp,
                                  const Eigen::Ref<const Eigen::MatrixXd>& Zq,
                                  const DescriptorSystem& sys, const ReductionTarget& target) {
    if (Zp.rows() != sys.order() || Zq.rows() != sys.order())
        throw ValidationError("invalid_system",
                              "Gramian factors do not match the system order");
    if (Zp.cols() == 0 || Zq.cols() == 0)
        throw NumericalError("rank_zero", "Gramian factor has no columns");

    Eigen::BDCSVD<Eigen::MatrixXd> svd(Zq.transpose() * Zp,
                                       Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sigma = svd.singularValues();
    if (sigma.size() == 0 || sigma(0) == 0.0)
        throw NumericalError("rank_zero", "factor product Zq^T Zp is zero");
    Eigen::Index rank = 0;
    while (rank < sigma.size() && sigma(rank) >= 1e-14 * sigma(0)) ++rank;

    SquareRootBtResult result;
    ReducedOrderModel& rom = result.rom;
    HsvSpectrum hsv(sigma);
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

    const double biorth = (T * Ti - Eigen::MatrixXd::Identity(r, r)).cwiseAbs().maxCoeff();
    if (biorth > 1e-8)
        rom.provenance.warnings.push_back(
            "balancing projections lost bi-orthogonality (||T T_inv - I||_max = " +
            std::to_string(biorth) + ")");

    Eigen::FullPivLU<Eigen::MatrixXd> lu(rom.C);
    if (!lu.isInvertible())
        throw NumericalError("singular_c", "reduced C is singular in balanced coordinates");
    return result;
}

SquareRootBtResult square_root_bt(const LowRankFactor& zp, const LowRankFactor& zq,
                                  const DescriptorSystem& sys, const ReductionTarget& target,
                                  double tol) {
    SquareRootBtResult result = square_root_bt(zp.Z, zq.Z, sys, target);
    RomProvenance& prov = result.rom.provenance;
    prov.method = "eksm";
    prov.tol = tol;
    prov.iterations_p = zp.iterations;
    prov.iterations_q = zq.iterations;
    prov.residual_p = zp.residual;
    prov.residual_q = zq.residual;
    prov.converged_p = zp.converged;
    prov.converged_q = zq.converged;
    prov.deflations_p = zp.deflations;
    prov.deflations_q = zq.deflations;
    if (!zp.converged || !zq.converged)
        prov.warnings.push_back(
            "a Gramian factor did not reach its residual tolerance; the spectrum and the "
            "truncation bound underestimate the true tail");
    return result;
}

double rom_error_bound(const HsvSpectrum& hsv, Eigen::Index r) { return hsv.bound(r); }

}  // namespace eksmor
