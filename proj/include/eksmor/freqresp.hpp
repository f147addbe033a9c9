// Copyright (c) 2026 The eksmor authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "eksmor/descriptor_system.hpp"
#include "eksmor/rom.hpp"

namespace eksmor {

/// Evaluation frequencies, stored in rad/s ascending. Generated grids must
/// be positive with at least two points; explicit point lists may start at
/// DC (omega = 0) and may be a single point.
class FrequencyGrid {
public:
    enum class Spacing { logarithmic, linear, points };

    static FrequencyGrid log_hz(double start_hz, double stop_hz, Eigen::Index count);
    static FrequencyGrid linear_hz(double start_hz, double stop_hz, Eigen::Index count);
    static FrequencyGrid from_hz(std::vector<double> hz);
    static FrequencyGrid from_omega(std::vector<double> omega);
    /// 201-point log grid, 1 MHz to 100 GHz.
    static FrequencyGrid standard();

    const std::vector<double>& omega() const { return omega_; }
    std::vector<double> hertz() const;
    Eigen::Index size() const { return static_cast<Eigen::Index>(omega_.size()); }
    Spacing spacing() const { return spacing_; }

    bool operator==(const FrequencyGrid& other) const { return omega_ == other.omega_; }

private:
    std::vector<double> omega_;
    Spacing spacing_ = Spacing::points;
};

struct TransferFunctionSamples {
    enum class Kind { admittance, generic };
    FrequencyGrid grid;
    std::vector<Eigen::MatrixXcd> values;  // q x p per grid point
    Kind kind = Kind::generic;
};

/// H(jw) = L (jw C - G)^{-1} B per grid point, one factorization per point
/// (sparse for full systems, dense for reduced ones); never an explicit
/// inverse. A singular pencil raises NumericalError("singular_pencil")
/// naming the frequency. Points are independent; `threads` > 1 splits them.
TransferFunctionSamples transfer_function(const DescriptorSystem& sys, const FrequencyGrid& grid,
                                          int threads = 1);
TransferFunctionSamples transfer_function(const ReducedOrderModel& rom, const FrequencyGrid& grid,
                                          int threads = 1);

struct SParamSet {
    FrequencyGrid grid;
    std::vector<Eigen::MatrixXcd> values;
    double z0 = 50.0;
};

/// Scattering parameters of an admittance-kind sample set:
///   S = (I - Z0 Y)(I + Z0 Y)^{-1}
SParamSet y_to_s(const TransferFunctionSamples& samples, double z0 = 50.0);

struct ComparisonMetrics {
    double max_error = 0;      // grid max of the per-point spectral-norm difference
    double max_freq_hz = 0;    // frequency attaining it
    double rms_error = 0;      // RMS over grid points of the spectral-norm difference
    double max_entry_error = 0;
    std::vector<double> per_point;
};

/// Per-point spectral-norm distance and its grid statistics. Grids and
/// dimensions must match exactly.
ComparisonMetrics compare(const TransferFunctionSamples& a, const TransferFunctionSamples& b);
ComparisonMetrics compare(const SParamSet& a, const SParamSet& b);

}  // namespace eksmor
