// Copyright (c) 2026 The eksmor authors
// SPDX-License-Identifier: Apache-2.0
#include "eksmor/freqresp.hpp"

#include <Eigen/SVD>
#include <Eigen/SparseLU>

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <thread>

#include "eksmor/errors.hpp"

namespace eksmor {

namespace {

using Complex = std::complex<double>;
using SpMatC = Eigen::SparseMatrix<Complex>;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_ascending(const std::vector<double>& omega, bool allow_dc) {
    if (omega.empty()) throw ValidationError("invalid_grid", "frequency grid is empty");
    for (size_t i = 0; i < omega.size(); ++i) {
        if (!std::isfinite(omega[i]) || omega[i] < 0 || (!allow_dc && omega[i] <= 0))
            throw ValidationError("invalid_grid", "grid frequencies must be positive");
        if (i > 0 && omega[i] <= omega[i - 1])
            throw ValidationError("invalid_grid", "grid frequencies must be strictly increasing");
    }
}

// Splits [0, count) into `threads` chunks and runs fn on each.
void parallel_for(Eigen::Index count, int threads, const std::function<void(Eigen::Index, Eigen::Index)>& fn) {
    if (threads <= 1 || count < 2) {
        fn(0, count);
        return;
    }
    const int used = static_cast<int>(std::min<Eigen::Index>(threads, count));
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<size_t>(used));
    const Eigen::Index chunk = (count + used - 1) / used;
    for (int t = 0; t < used; ++t) {
        const Eigen::Index begin = t * chunk;
        const Eigen::Index end = std::min(count, begin + chunk);
        pool.emplace_back([&, t, begin, end] {
            try {
                fn(begin, end);
            } catch (...) {
                errors[static_cast<size_t>(t)] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

[[noreturn]] void singular_pencil(double omega) {
    std::ostringstream msg;
    msg << "pencil (j*omega*C - G) is singular at omega = " << omega << " rad/s ("
        << omega / kTwoPi << " Hz)";
    throw NumericalError("singular_pencil", msg.str());
}

}  // namespace

FrequencyGrid FrequencyGrid::log_hz(double start_hz, double stop_hz, Eigen::Index count) {
    if (count < 2) throw ValidationError("invalid_grid", "generated grids need >= 2 points");
    if (!(start_hz > 0) || !(stop_hz > start_hz))
        throw ValidationError("invalid_grid", "log grid needs 0 < start < stop");
    FrequencyGrid g;
    g.spacing_ = Spacing::logarithmic;
    const double l0 = std::log10(start_hz);
    const double l1 = std::log10(stop_hz);
    g.omega_.resize(static_cast<size_t>(count));
    for (Eigen::Index i = 0; i < count; ++i)
        g.omega_[static_cast<size_t>(i)] =
            kTwoPi * std::pow(10.0, l0 + (l1 - l0) * static_cast<double>(i) /
                                             static_cast<double>(count - 1));
    check_ascending(g.omega_, false);
    return g;
}

FrequencyGrid FrequencyGrid::linear_hz(double start_hz, double stop_hz, Eigen::Index count) {
    if (count < 2) throw ValidationError("invalid_grid", "generated grids need >= 2 points");
    if (!(start_hz > 0) || !(stop_hz > start_hz))
        throw ValidationError("invalid_grid", "linear grid needs 0 < start < stop");
    FrequencyGrid g;
    g.spacing_ = Spacing::linear;
    g.omega_.resize(static_cast<size_t>(count));
    for (Eigen::Index i = 0; i < count; ++i)
        g.omega_[static_cast<size_t>(i)] =
            kTwoPi * (start_hz + (stop_hz - start_hz) * static_cast<double>(i) /
                                     static_cast<double>(count - 1));
    check_ascending(g.omega_, false);
    return g;
}

FrequencyGrid FrequencyGrid::from_hz(std::vector<double> hz) {
    for (auto& f : hz) f *= kTwoPi;
    return from_omega(std::move(hz));
}

FrequencyGrid FrequencyGrid::from_omega(std::vector<double> omega) {
    // Explicit lists may include DC and may be a single point.
    check_ascending(omega, true);
    FrequencyGrid g;
    g.omega_ = std::move(omega);
    g.spacing_ = Spacing::points;
    return g;
}

FrequencyGrid FrequencyGrid::standard() { return log_hz(1e6, 100e9, 201); }

std::vector<double> FrequencyGrid::hertz() const {
    std::vector<double> hz(omega_.size());
    for (size_t i = 0; i < omega_.size(); ++i) hz[i] = omega_[i] / kTwoPi;
    return hz;
}

TransferFunctionSamples transfer_function(const DescriptorSystem& sys, const FrequencyGrid& grid,
                                          int threads) {
    sys.validate();
    const Eigen::Index N = sys.order();
    const SpMat C = sys.C();
    const SpMat& G = sys.G;
    const Eigen::MatrixXcd Bc = Eigen::MatrixXd(sys.B).cast<Complex>();
    const Eigen::MatrixXcd Lc = Eigen::MatrixXd(sys.L).cast<Complex>();

    // One pencil with the union sparsity pattern; each point refills values
    // so the solver can reuse the symbolic analysis.
    std::vector<Eigen::Triplet<Complex>> pattern;
    pattern.reserve(static_cast<size_t>(C.nonZeros() + G.nonZeros()));
    for (Eigen::Index c = 0; c < C.outerSize(); ++c)
        for (SpMat::InnerIterator it(C, c); it; ++it)
            pattern.emplace_back(it.row(), c, Complex(0, it.value()));
    for (Eigen::Index c = 0; c < G.outerSize(); ++c)
        for (SpMat::InnerIterator it(G, c); it; ++it)
            pattern.emplace_back(it.row(), c, Complex(1e-300, 0));  // keep slot in the pattern

    TransferFunctionSamples samples;
    samples.grid = grid;
    samples.values.resize(static_cast<size_t>(grid.size()));
    samples.kind = sys.admittance_ports ? TransferFunctionSamples::Kind::admittance
                                        : TransferFunctionSamples::Kind::generic;

    parallel_for(grid.size(), threads, [&](Eigen::Index begin, Eigen::Index end) {
        SpMatC pencil(N, N);
        pencil.setFromTriplets(pattern.begin(), pattern.end());
        pencil.makeCompressed();
        Eigen::SparseLU<SpMatC> lu;
        lu.analyzePattern(pencil);
        for (Eigen::Index idx = begin; idx < end; ++idx) {
            const double omega = grid.omega()[static_cast<size_t>(idx)];
            // refill: j*omega*C - G over the union pattern
            for (Eigen::Index c = 0; c < pencil.outerSize(); ++c)
                for (SpMatC::InnerIterator it(pencil, c); it; ++it)
                    it.valueRef() = Complex(-G.coeff(it.row(), c), omega * C.coeff(it.row(), c));
            lu.factorize(pencil);
            if (lu.info() != Eigen::Success) singular_pencil(omega);
            samples.values[static_cast<size_t>(idx)] = Lc * lu.solve(Bc);
        }
    });
    return samples;
}

TransferFunctionSamples transfer_function(const ReducedOrderModel& rom, const FrequencyGrid& grid,
                                          int threads) {
    const Eigen::MatrixXcd G = rom.G.cast<Complex>();
    const Eigen::MatrixXcd C = rom.C.cast<Complex>();
    const Eigen::MatrixXcd B = rom.B.cast<Complex>();
    const Eigen::MatrixXcd L = rom.L.cast<Complex>();

    TransferFunctionSamples samples;
    samples.grid = grid;
    samples.values.resize(static_cast<size_t>(grid.size()));
    samples.kind = rom.admittance_ports ? TransferFunctionSamples::Kind::admittance
                                        : TransferFunctionSamples::Kind::generic;

    parallel_for(grid.size(), threads, [&](Eigen::Index begin, Eigen::Index end) {
        for (Eigen::Index idx = begin; idx < end; ++idx) {
            const double omega = grid.omega()[static_cast<size_t>(idx)];
            Eigen::FullPivLU<Eigen::MatrixXcd> lu(Complex(0, omega) * C - G);
            if (!lu.isInvertible()) singular_pencil(omega);
            samples.values[static_cast<size_t>(idx)] = L * lu.solve(B);
        }
    });
    return samples;
}

SParamSet y_to_s(const TransferFunctionSamples& samples, double z0) {
    if (samples.kind != TransferFunctionSamples::Kind::admittance)
        throw ValidationError("invalid_kind",
                              "S-parameter conversion requires admittance-kind samples");
    if (!(z0 > 0)) throw ValidationError("invalid_config", "reference impedance must be > 0");

    SParamSet s;
    s.grid = samples.grid;
    s.z0 = z0;
    s.values.reserve(samples.values.size());
    for (size_t i = 0; i < samples.values.size(); ++i) {
        const Eigen::MatrixXcd& Y = samples.values[i];
        if (Y.rows() != Y.cols())
            throw ValidationError("invalid_kind", "admittance samples must be square");
        const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(Y.rows(), Y.cols());
        Eigen::FullPivLU<Eigen::MatrixXcd> lu(I + z0 * Y);
        if (!lu.isInvertible()) {
            std::ostringstream msg;
            msg << "I + Z0*Y is singular at omega = " << samples.grid.omega()[i] << " rad/s";
            throw NumericalError("singular_pencil", msg.str());
        }
        // (I - Z0 Y) and (I + Z0 Y)^{-1} commute, so the order is free.
        s.values.push_back(lu.solve(I - z0 * Y));
    }
    return s;
}

namespace {

ComparisonMetrics compare_values(const FrequencyGrid& grid_a, const FrequencyGrid& grid_b,
                                 const std::vector<Eigen::MatrixXcd>& a,
                                 const std::vector<Eigen::MatrixXcd>& b) {
    if (!(grid_a == grid_b)) throw ValidationError("grid_mismatch", "frequency grids differ");
    if (a.size() != b.size()) throw ValidationError("grid_mismatch", "sample counts differ");

    ComparisonMetrics m;
    m.per_point.resize(a.size());
    double sum_sq = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].rows() != b[i].rows() || a[i].cols() != b[i].cols())
            throw ValidationError("dimension_mismatch", "sample dimensions differ");
        const Eigen::MatrixXcd diff = a[i] - b[i];
        const double spectral =
            diff.size() == 0 ? 0.0 : diff.jacobiSvd().singularValues()(0);
        m.per_point[i] = spectral;
        sum_sq += spectral * spectral;
        if (spectral >= m.max_error) {
            m.max_error = spectral;
            m.max_freq_hz = grid_a.omega()[i] / kTwoPi;
        }
        if (diff.size() > 0)
            m.max_entry_error = std::max(m.max_entry_error, diff.cwiseAbs().maxCoeff());
    }
    m.rms_error = std::sqrt(sum_sq / static_cast<double>(a.size()));
    return m;
}

}  // namespace

ComparisonMetrics compare(const TransferFunctionSamples& a, const TransferFunctionSamples& b) {
    return compare_values(a.grid, b.grid, a.values, b.values);
}

ComparisonMetrics compare(const SParamSet& a, const SParamSet& b) {
    return compare_values(a.grid, b.grid, a.values, b.values);
}

}  // namespace eksmor
