// Copyright (c) 2026 The eksmor authors
// SPDX-License-Identifier: Apache-2.0
#include "eksmor/sparam_io.hpp"

#include <cstdio>
#include <fstream>

#include "eksmor/errors.hpp"

namespace eksmor {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12e", v);
    return buf;
}

}  // namespace

std::string touchstone_extension(Eigen::Index nports) {
    return ".s" + std::to_string(nports) + "p";
}

void write_sparams_csv(const std::string& path, const SParamSet& s) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    if (s.values.empty()) throw ValidationError("invalid_grid", "no samples to write");
    const Eigen::Index rows = s.values.front().rows();
    const Eigen::Index cols = s.values.front().cols();

    out << "freq_hz";
    for (Eigen::Index i = 1; i <= rows; ++i)
        for (Eigen::Index j = 1; j <= cols; ++j)
            out << ",S" << i << j << "_re,S" << i << j << "_im";
    out << '\n';

    const std::vector<double> hz = s.grid.hertz();
    for (size_t k = 0; k < s.values.size(); ++k) {
        out << fmt(hz[k]);
        const Eigen::MatrixXcd& m = s.values[k];
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j)
                out << ',' << fmt(m(i, j).real()) << ',' << fmt(m(i, j).imag());
        out << '\n';
    }
    if (!out) throw IoError("write to '" + path + "' failed");
}

void write_touchstone(const std::string& path, const SParamSet& s) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    if (s.values.empty()) throw ValidationError("invalid_grid", "no samples to write");
    const Eigen::Index n = s.values.front().rows();
    if (s.values.front().cols() != n)
        throw ValidationError("invalid_kind", "Touchstone output needs a square network");

    out << "! " << n << "-port scattering parameters\n";
    out << "# HZ S RI R " << s.z0 << '\n';

    const std::vector<double> hz = s.grid.hertz();
    for (size_t k = 0; k < s.values.size(); ++k) {
        const Eigen::MatrixXcd& m = s.values[k];
        if (n <= 2) {
            out << fmt(hz[k]);
            if (n == 1) {
                out << ' ' << fmt(m(0, 0).real()) << ' ' << fmt(m(0, 0).imag());
            } else {
                // 2-port records run S11 S21 S12 S22.
                out << ' ' << fmt(m(0, 0).real()) << ' ' << fmt(m(0, 0).imag());
                out << ' ' << fmt(m(1, 0).real()) << ' ' << fmt(m(1, 0).imag());
                out << ' ' << fmt(m(0, 1).real()) << ' ' << fmt(m(0, 1).imag());
                out << ' ' << fmt(m(1, 1).real()) << ' ' << fmt(m(1, 1).imag());
            }
            out << '\n';
        } else {
            // Row-major, each matrix row starting a new line, at most four
            // complex pairs per line.
            for (Eigen::Index i = 0; i < n; ++i) {
                Eigen::Index written = 0;
                for (Eigen::Index j = 0; j < n; ++j) {
                    if (i == 0 && j == 0)
                        out << fmt(hz[k]);
                    else if (written == 0 && j != 0)
                        out << "  ";  // continuation line
                    out << ' ' << fmt(m(i, j).real()) << ' ' << fmt(m(i, j).imag());
                    if (++written == 4 && j + 1 < n) {
                        out << '\n';
                        written = 0;
                    }
                }
                out << '\n';
            }
        }
    }
    if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace eksmor
