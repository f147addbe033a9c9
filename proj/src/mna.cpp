// Copyright (c) 2026 The eksmor authors
// SPDX-License-Identifier: Apache-2.0
#include "eksmor/mna.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "eksmor/errors.hpp"

namespace eksmor {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

class NodeIndex {
public:
    NodeIndex(const std::vector<std::string>& order) {
        for (const auto& n : order) index_.emplace(n, static_cast<Eigen::Index>(index_.size()));
    }
    // -1 for ground
    Eigen::Index operator()(const std::string& node) const {
        if (node == "0") return -1;
        auto it = index_.find(node);
        if (it == index_.end())
            throw ValidationError("invalid_element", "node '" + node + "' missing from numbering");
        return it->second;
    }

private:
    std::map<std::string, Eigen::Index> index_;
};

// Conductance/capacitance two-terminal stamp; ground rows/columns eliminated.
void stamp_two_terminal(Triplets& t, Eigen::Index a, Eigen::Index b, double value) {
    if (a >= 0) t.emplace_back(a, a, value);
    if (b >= 0) t.emplace_back(b, b, value);
    if (a >= 0 && b >= 0) {
        t.emplace_back(a, b, -value);
        t.emplace_back(b, a, -value);
    }
}

// Union-find over the capacitor graph; ground is element 0, node i is i+1.
class DisjointSet {
public:
    explicit DisjointSet(size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
    size_t find(size_t x) {
        while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
        return x;
    }
    void unite(size_t a, size_t b) { parent_[find(a)] = find(b); }

private:
    std::vector<size_t> parent_;
};

}  // namespace

MnaNumbering derive_numbering(const ElementList& elems) {
    MnaNumbering numbering;
    std::set<std::string> seen;
    auto note = [&](const std::string& node) {
        if (node != "0" && seen.insert(node).second) numbering.nodes.push_back(node);
    };
    if (!elems.node_order.empty()) {
        for (const auto& n : elems.node_order) note(n);
    }
    for (const auto& r : elems.resistors) {
        note(r.node_a);
        note(r.node_b);
    }
    for (const auto& c : elems.capacitors) {
        note(c.node_a);
        note(c.node_b);
    }
    for (const auto& l : elems.inductors) {
        note(l.node_a);
        note(l.node_b);
    }
    for (const auto& p : elems.ports) note(p.node);
    for (const auto& l : elems.inductors) numbering.branches.push_back(l.name);
    return numbering;
}

MnaStamps stamp_elements(const ElementList& elems, const MnaNumbering& numbering) {
    const auto n = static_cast<Eigen::Index>(numbering.nodes.size());
    const auto m = static_cast<Eigen::Index>(numbering.branches.size());
    const auto p = static_cast<Eigen::Index>(elems.ports.size());
    NodeIndex node(numbering.nodes);

    std::map<std::string, Eigen::Index> branch;
    for (Eigen::Index i = 0; i < m; ++i) branch.emplace(numbering.branches[i], i);
    auto branch_of = [&](const std::string& name) {
        auto it = branch.find(name);
        if (it == branch.end())
            throw ValidationError("invalid_element",
                                  "inductor '" + name + "' missing from numbering");
        return it->second;
    };

    Triplets gn, cn, e, b1;
    for (const auto& r : elems.resistors)
        stamp_two_terminal(gn, node(r.node_a), node(r.node_b), 1.0 / r.ohms);
    for (const auto& c : elems.capacitors)
        stamp_two_terminal(cn, node(c.node_a), node(c.node_b), c.farads);

    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(m, m);
    for (const auto& l : elems.inductors) {
        const Eigen::Index b = branch_of(l.name);
        M(b, b) += l.henries;
        const Eigen::Index na = node(l.node_a);
        const Eigen::Index nb = node(l.node_b);
        if (na >= 0) e.emplace_back(na, b, 1.0);
        if (nb >= 0) e.emplace_back(nb, b, -1.0);
    }
    std::map<std::string, double> henries;
    for (const auto& l : elems.inductors) henries[l.name] = l.henries;
    for (const auto& k : elems.mutual_couplings) {
        const Eigen::Index bi = branch_of(k.inductor_a);
        const Eigen::Index bj = branch_of(k.inductor_b);
        const double mij = k.is_coefficient
                               ? k.value * std::sqrt(henries.at(k.inductor_a) *
                                                     henries.at(k.inductor_b))
                               : k.value;
        M(bi, bj) += mij;
        M(bj, bi) += mij;
    }

    for (Eigen::Index i = 0; i < p; ++i) {
        const Eigen::Index pn = node(elems.ports[i].node);
        if (pn >= 0) b1.emplace_back(pn, i, 1.0);
    }

    MnaStamps stamps;
    stamps.Gn.resize(n, n);
    stamps.Gn.setFromTriplets(gn.begin(), gn.end());
    stamps.Cn.resize(n, n);
    stamps.Cn.setFromTriplets(cn.begin(), cn.end());
    stamps.M = std::move(M);
    stamps.E.resize(n, m);
    stamps.E.setFromTriplets(e.begin(), e.end());
    stamps.B1.resize(n, p);
    stamps.B1.setFromTriplets(b1.begin(), b1.end());
    return stamps;
}

DescriptorSystem assemble_mna(const ElementList& elems, const AssemblyOptions& opts) {
    validate_elements(elems);
    const MnaNumbering numbering = derive_numbering(elems);
    MnaStamps stamps = stamp_elements(elems, numbering);
    const Eigen::Index n = stamps.Gn.rows();
    const Eigen::Index m = stamps.M.rows();
    const Eigen::Index p = stamps.B1.cols();

    // Every connected component of the capacitor graph must reach ground,
    // otherwise Cn is singular. Nodes outside the grounded component get the
    // grounding capacitance (or a diagnostic when that is disabled).
    DisjointSet components(static_cast<size_t>(n) + 1);
    NodeIndex node(numbering.nodes);
    for (const auto& c : elems.capacitors) {
        const Eigen::Index a = node(c.node_a);
        const Eigen::Index b = node(c.node_b);
        components.unite(static_cast<size_t>(a + 1), static_cast<size_t>(b + 1));
    }
    std::vector<Eigen::Index> floating;
    for (Eigen::Index i = 0; i < n; ++i)
        if (components.find(static_cast<size_t>(i + 1)) != components.find(0))
            floating.push_back(i);
    if (!floating.empty()) {
        if (opts.grounding_capacitance > 0) {
            for (Eigen::Index i : floating)
                stamps.Cn.coeffRef(i, i) += opts.grounding_capacitance;
            stamps.Cn.makeCompressed();
        } else {
            std::ostringstream msg;
            msg << "node capacitance block is singular; nodes without a capacitive path to "
                   "ground:";
            for (Eigen::Index i : floating) msg << ' ' << numbering.nodes[static_cast<size_t>(i)];
            throw NumericalError("singular_c", msg.str());
        }
    }

    if (m > 0) {
        for (const auto& k : elems.mutual_couplings)
            if (k.is_coefficient && std::abs(k.value) >= 1.0)
                throw NumericalError("indefinite_m", "coupling " + k.name +
                                                         " has |k| = 1: branch inductance "
                                                         "matrix is not positive definite");
        Eigen::LLT<Eigen::MatrixXd> llt(stamps.M);
        if (llt.info() != Eigen::Success)
            throw NumericalError("indefinite_m",
                                 "branch inductance matrix is not positive definite");
    }

    const Eigen::Index N = n + m;
    DescriptorSystem sys;

    // G = -[[Gn, E], [-E^T, 0]]
    Triplets g;
    g.reserve(static_cast<size_t>(stamps.Gn.nonZeros() + 2 * stamps.E.nonZeros()));
    for (Eigen::Index col = 0; col < n; ++col)
        for (SpMat::InnerIterator it(stamps.Gn, col); it; ++it)
            g.emplace_back(it.row(), col, -it.value());
    for (Eigen::Index col = 0; col < m; ++col)
        for (SpMat::InnerIterator it(stamps.E, col); it; ++it) {
            g.emplace_back(it.row(), n + col, -it.value());  // -E
            g.emplace_back(n + col, it.row(), it.value());   // +E^T
        }
    sys.G.resize(N, N);
    sys.G.setFromTriplets(g.begin(), g.end());

    sys.Cn = std::move(stamps.Cn);
    sys.M = std::move(stamps.M);

    Triplets b;
    for (Eigen::Index col = 0; col < p; ++col)
        for (SpMat::InnerIterator it(stamps.B1, col); it; ++it)
            b.emplace_back(it.row(), col, it.value());
    sys.B.resize(N, p);
    sys.B.setFromTriplets(b.begin(), b.end());

    Triplets l;
    for (const auto& t : b) l.emplace_back(t.col(), t.row(), t.value());
    sys.L.resize(p, N);
    sys.L.setFromTriplets(l.begin(), l.end());

    for (const auto& port : elems.ports) sys.ports.push_back(port.name);
    sys.admittance_ports = true;
    return sys;
}

}  // namespace eksmor
