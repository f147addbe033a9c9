// Copyright (c) 2026 The eksmor authors
// SPDX-License-Identifier: Apache-2.0
#include "support.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace eksmor::test {

namespace {

std::string node_name(const std::string& prefix, int i) { return prefix + std::to_string(i); }

}  // namespace

ElementList rc_ladder(int sections, double r, double c, double r_term) {
    ElementList e;
    for (int i = 1; i <= sections; ++i) {
        const std::string here = node_name("n", i);
        const std::string prev = i == 1 ? "0" : node_name("n", i - 1);
        if (i > 1) e.resistors.push_back({"R" + std::to_string(i), prev, here, r, 0});
        e.capacitors.push_back({"C" + std::to_string(i), here, "0", c, 0});
    }
    e.resistors.push_back({"Rterm", node_name("n", sections), "0", r_term, 0});
    e.ports.push_back({"P1", "n1", "0", 0});
    return e;
}

ElementList rlc_ladder_chains(const std::vector<int>& sections, double r, double l, double c,
                              double k, double r_term) {
    ElementList e;
    const int chains = static_cast<int>(sections.size());
    std::vector<std::vector<std::string>> inductors(sections.size());
    for (int ch = 0; ch < chains; ++ch) {
        const std::string cp = "c" + std::to_string(ch) + "_";
        e.capacitors.push_back({"C" + cp + "0", node_name(cp, 0), "0", c, 0});
        for (int i = 1; i <= sections[static_cast<size_t>(ch)]; ++i) {
            const std::string prev = node_name(cp, i - 1);
            const std::string here = node_name(cp, i);
            const std::string ln = "L" + cp + std::to_string(i);
            e.inductors.push_back({ln, prev, here, l, 0});
            e.resistors.push_back({"R" + cp + std::to_string(i), prev, here, r, 0});
            e.capacitors.push_back({"C" + cp + std::to_string(i), here, "0", c, 0});
            inductors[static_cast<size_t>(ch)].push_back(ln);
        }
        e.resistors.push_back(
            {"Rterm" + cp, node_name(cp, sections[static_cast<size_t>(ch)]), "0", r_term, 0});
        e.ports.push_back({"P" + std::to_string(ch + 1), node_name(cp, 0), "0", 0});
    }
    if (k != 0.0) {
        int kn = 0;
        for (int ch = 0; ch < chains; ++ch) {
            const auto& own = inductors[static_cast<size_t>(ch)];
            for (size_t i = 0; i + 1 < own.size(); ++i)
                e.mutual_couplings.push_back(
                    {"K" + std::to_string(++kn), own[i], own[i + 1], k, true, 0});
        }
        for (int ch = 0; ch + 1 < chains; ++ch) {
            const auto& own = inductors[static_cast<size_t>(ch)];
            const auto& next = inductors[static_cast<size_t>(ch) + 1];
            for (size_t i = 0; i < std::min(own.size(), next.size()); ++i)
                e.mutual_couplings.push_back(
                    {"K" + std::to_string(++kn), own[i], next[i], k, true, 0});
        }
    }
    return e;
}

ElementList rlc_ladder(int sections, int chains, double r, double l, double c, double k,
                       double r_term) {
    return rlc_ladder_chains(std::vector<int>(static_cast<size_t>(chains), sections), r, l, c, k,
                             r_term);
}

ElementList rc_mesh(int width, int height, Rng& rng, int nports) {
    std::uniform_real_distribution<double> val(0.5, 2.0);
    ElementList e;
    auto node = [&](int x, int y) { return "n" + std::to_string(x) + "_" + std::to_string(y); };
    int rn = 0, cn = 0;
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            if (x + 1 < width)
                e.resistors.push_back(
                    {"R" + std::to_string(++rn), node(x, y), node(x + 1, y), val(rng), 0});
            if (y + 1 < height)
                e.resistors.push_back(
                    {"R" + std::to_string(++rn), node(x, y), node(x, y + 1), val(rng), 0});
            e.capacitors.push_back({"C" + std::to_string(++cn), node(x, y), "0", val(rng), 0});
        }
    e.resistors.push_back({"Rg", node(0, 0), "0", val(rng), 0});
    const std::string corners[4] = {node(0, 0), node(width - 1, height - 1), node(width - 1, 0),
                                    node(0, height - 1)};
    for (int i = 0; i < std::min(nports, 4); ++i)
        e.ports.push_back({"P" + std::to_string(i + 1), corners[i], "0", 0});
    return e;
}

DescriptorSystem system_from_dense(const Eigen::MatrixXd& G, const Eigen::MatrixXd& C,
                                   const Eigen::MatrixXd& B, const Eigen::MatrixXd& L,
                                   bool admittance) {
    DescriptorSystem sys;
    sys.G = G.sparseView();
    sys.Cn = C.sparseView();
    sys.M.resize(0, 0);
    sys.B = B.sparseView();
    sys.L = L.sparseView();
    for (Eigen::Index i = 0; i < B.cols(); ++i) sys.ports.push_back("p" + std::to_string(i + 1));
    sys.admittance_ports = admittance;
    return sys;
}

DescriptorSystem random_stable_system(Eigen::Index n, Eigen::Index p, Eigen::Index q, Rng& rng) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    Eigen::MatrixXd A(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) A(i, j) = uni(rng);
    const double shift = A.cwiseAbs().rowwise().sum().maxCoeff() + 1.0;
    A.diagonal().array() -= shift;

    Eigen::MatrixXd S(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) S(i, j) = gauss(rng);
    Eigen::MatrixXd C = Eigen::MatrixXd::Identity(n, n) + 0.1 / static_cast<double>(n) * S * S.transpose();

    // column scales ~1/sqrt(n) keep ||H|| at O(1) so absolute round-off
    // slack in grid comparisons stays meaningful
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    Eigen::MatrixXd B(n, p), L(q, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < p; ++j) B(i, j) = scale * gauss(rng);
        for (Eigen::Index j = 0; j < q; ++j) L(j, i) = scale * gauss(rng);
    }
    return system_from_dense(C * A, C, B, L);
}

DenseOperator dense_operator(const DescriptorSystem& sys, GramianSide side) {
    DenseRealization d = dense_realization(sys);
    DenseOperator op;
    if (side == GramianSide::controllability) {
        op.A = d.A;
        op.rhs = d.Bc;
    } else {
        op.A = d.A.transpose();
        op.rhs = d.L.transpose();
    }
    return op;
}

DenseOperator dense_whitened_operator(const DescriptorSystem& sys, GramianSide side) {
    const Eigen::MatrixXd C(sys.C());
    const Eigen::MatrixXd G(sys.G);
    Eigen::LLT<Eigen::MatrixXd> llt(C);
    if (llt.info() != Eigen::Success) throw std::runtime_error("C is not positive definite");
    const Eigen::MatrixXd Lc = llt.matrixL();
    auto lower = Lc.triangularView<Eigen::Lower>();

    DenseOperator op;
    if (side == GramianSide::controllability) {
        op.A = lower.solve(Eigen::MatrixXd(lower.solve(G).transpose())).transpose();
        op.rhs = lower.solve(Eigen::MatrixXd(sys.B));
    } else {
        op.A = lower.solve(Eigen::MatrixXd(lower.solve(G.transpose()).transpose())).transpose();
        op.rhs = lower.solve(Eigen::MatrixXd(SpMat(sys.L.transpose())));
    }
    return op;
}

std::string to_netlist(const ElementList& elems) {
    std::ostringstream out;
    char val[40];
    auto num = [&](double v) {
        std::snprintf(val, sizeof(val), "%.17g", v);
        return std::string(val);
    };
    for (const auto& r : elems.resistors)
        out << r.name << ' ' << r.node_a << ' ' << r.node_b << ' ' << num(r.ohms) << '\n';
    for (const auto& c : elems.capacitors)
        out << c.name << ' ' << c.node_a << ' ' << c.node_b << ' ' << num(c.farads) << '\n';
    for (const auto& l : elems.inductors)
        out << l.name << ' ' << l.node_a << ' ' << l.node_b << ' ' << num(l.henries) << '\n';
    for (const auto& k : elems.mutual_couplings)
        out << k.name << ' ' << k.inductor_a << ' ' << k.inductor_b << ' ' << num(k.value) << '\n';
    for (const auto& p : elems.ports) out << p.name << ' ' << p.node << '\n';
    return out.str();
}

TouchstoneData touchstone_parse(const std::string& path, Eigen::Index nports) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);

    auto fail = [&](int line, const std::string& why) {
        throw std::runtime_error(path + ":" + std::to_string(line) + ": " + why);
    };

    TouchstoneData data;
    bool have_option = false;
    std::vector<double> numbers;  // flattened data stream after the option line
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto bang = line.find('!');
        if (bang != std::string::npos) line = line.substr(0, bang);
        std::istringstream ss(line);
        std::string first;
        if (!(ss >> first)) continue;
        if (first == "#") {
            if (have_option) fail(line_no, "duplicate option line");
            std::string unit, param, format, rtoken;
            if (!(ss >> unit >> param >> format >> rtoken)) fail(line_no, "short option line");
            if (unit != "HZ") fail(line_no, "expected HZ frequency unit");
            if (param != "S") fail(line_no, "expected S parameters");
            if (format != "RI") fail(line_no, "expected RI format");
            if (rtoken != "R") fail(line_no, "expected R token");
            if (!(ss >> data.z0)) fail(line_no, "missing reference impedance");
            have_option = true;
            continue;
        }
        if (!have_option) fail(line_no, "data before the option line");
        std::istringstream nums(line);
        double v;
        while (nums >> v) numbers.push_back(v);
        if (!nums.eof()) fail(line_no, "non-numeric token in data");
    }
    if (!have_option) throw std::runtime_error(path + ": no option line");

    const size_t per_record = 1 + 2 * static_cast<size_t>(nports) * static_cast<size_t>(nports);
    if (numbers.size() % per_record != 0)
        throw std::runtime_error(path + ": data does not divide into whole records");

    for (size_t off = 0; off < numbers.size(); off += per_record) {
        TouchstoneRecord rec;
        rec.freq_hz = numbers[off];
        rec.s.resize(nports, nports);
        size_t k = off + 1;
        if (nports == 2) {
            // v1 2-port order: S11 S21 S12 S22
            rec.s(0, 0) = {numbers[k], numbers[k + 1]};
            rec.s(1, 0) = {numbers[k + 2], numbers[k + 3]};
            rec.s(0, 1) = {numbers[k + 4], numbers[k + 5]};
            rec.s(1, 1) = {numbers[k + 6], numbers[k + 7]};
        } else {
            for (Eigen::Index i = 0; i < nports; ++i)
                for (Eigen::Index j = 0; j < nports; ++j) {
                    rec.s(i, j) = {numbers[k], numbers[k + 1]};
                    k += 2;
                }
        }
        if (!data.records.empty() && rec.freq_hz <= data.records.back().freq_hz)
            throw std::runtime_error(path + ": frequencies not strictly increasing");
        data.records.push_back(std::move(rec));
    }
    return data;
}

}  // namespace eksmor::test
