// Copyright (c) 2026 The eksmor authors
// SPDX-License-Identifier: Apache-2.0
#include "eksmor/matrix_market.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "eksmor/errors.hpp"

namespace eksmor {

namespace {

std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

void write_entries(std::ofstream& out, const SpMat& m) {
    char buf[64];
    for (Eigen::Index c = 0; c < m.outerSize(); ++c)
        for (SpMat::InnerIterator it(m, c); it; ++it) {
            std::snprintf(buf, sizeof(buf), "%ld %ld %.17g\n", static_cast<long>(it.row() + 1),
                          static_cast<long>(it.col() + 1), it.value());
            out << buf;
        }
}

}  // namespace

void write_matrix_market(const std::string& path, const SpMat& m) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    SpMat compressed = m;
    compressed.makeCompressed();
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << m.rows() << ' ' << m.cols() << ' ' << compressed.nonZeros() << '\n';
    write_entries(out, compressed);
    if (!out) throw IoError("write to '" + path + "' failed");
}

void write_matrix_market(const std::string& path, const Eigen::MatrixXd& m) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << m.rows() << ' ' << m.cols() << ' ' << m.size() << '\n';
    char buf[64];
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            std::snprintf(buf, sizeof(buf), "%ld %ld %.17g\n", static_cast<long>(r + 1),
                          static_cast<long>(c + 1), m(r, c));
            out << buf;
        }
    if (!out) throw IoError("write to '" + path + "' failed");
}

SpMat read_matrix_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");

    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty matrix file '" + path + "'", 1);
    std::istringstream header(lower(line));
    std::string banner, object, format, field, symmetry;
    header >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%matrixmarket" || object != "matrix" || format != "coordinate")
        throw ParseError("'" + path + "' is not a coordinate-format MatrixMarket file", 1);
    if (field != "real")
        throw ParseError("unsupported field type '" + field + "' in '" + path + "'", 1);
    const bool symmetric = symmetry == "symmetric";
    if (!symmetric && symmetry != "general")
        throw ParseError("unsupported symmetry '" + symmetry + "' in '" + path + "'", 1);

    int line_no = 1;
    Eigen::Index rows = 0, cols = 0;
    long nnz = -1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '%') continue;
        std::istringstream dims(line);
        if (!(dims >> rows >> cols >> nnz) || rows < 0 || cols < 0 || nnz < 0)
            throw ParseError("malformed size line in '" + path + "'", line_no);
        break;
    }
    if (nnz < 0) throw ParseError("missing size line in '" + path + "'", line_no);

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<size_t>(symmetric ? 2 * nnz : nnz));
    long seen = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '%') continue;
        std::istringstream entry(line);
        long i = 0, j = 0;
        double v = 0;
        if (!(entry >> i >> j >> v))
            throw ParseError("malformed entry in '" + path + "'", line_no);
        if (i < 1 || i > rows || j < 1 || j > cols)
            throw ParseError("entry index out of range in '" + path + "'", line_no);
        ++seen;
        triplets.emplace_back(i - 1, j - 1, v);
        if (symmetric && i != j) triplets.emplace_back(j - 1, i - 1, v);
    }
    if (seen != nnz)
        throw ParseError("'" + path + "' declares " + std::to_string(nnz) + " entries but has " +
                             std::to_string(seen),
                         line_no);

    SpMat m(rows, cols);
    m.setFromTriplets(triplets.begin(), triplets.end());
    m.makeCompressed();
    return m;
}

}  // namespace eksmor
