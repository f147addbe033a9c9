// Copyright (c) 2026 The eksmor authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <Eigen/Dense>

#include <random>

#include "eksmor/errors.hpp"
#include "eksmor/mna.hpp"
#include "support.hpp"

using namespace eksmor;

namespace {

Eigen::MatrixXd dense(const SpMat& m) { return Eigen::MatrixXd(m); }

}  // namespace

TEST_SUITE("mna") {

TEST_CASE("single node: R and C to ground with a port") {
    ElementList e = parse_netlist(
        "R1 1 0 1\n"
        "C1 1 0 1\n"
        "P1 1\n");
    DescriptorSystem sys = assemble_mna(e);
    REQUIRE(sys.order() == 1);
    CHECK(dense(sys.G)(0, 0) == -1.0);
    CHECK(dense(sys.C())(0, 0) == 1.0);
    CHECK(dense(sys.B)(0, 0) == 1.0);
    CHECK(dense(sys.L)(0, 0) == 1.0);
    CHECK(sys.admittance_ports);
}

TEST_CASE("adding an inductive branch produces the two-by-two block form") {
    ElementList e = parse_netlist(
        "R1 1 0 1\n"
        "C1 1 0 1\n"
        "L1 1 0 1\n"
        "P1 1\n");
    DescriptorSystem sys = assemble_mna(e);
    REQUIRE(sys.order() == 2);
    REQUIRE(sys.nodes() == 1);
    REQUIRE(sys.branches() == 1);

    Eigen::MatrixXd expected_g(2, 2);
    expected_g << -1, -1, 1, 0;
    CHECK((dense(sys.G) - expected_g).cwiseAbs().maxCoeff() == 0.0);
    CHECK((dense(sys.C()) - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);
    // ports touch nodes only
    CHECK(dense(sys.B)(1, 0) == 0.0);
    CHECK(dense(sys.L)(0, 1) == 0.0);
}

TEST_CASE("coupled inductors from a coefficient") {
    ElementList e = parse_netlist(
        "L1 1 0 1\n"
        "L2 2 0 1\n"
        "C1 1 0 1\n"
        "C2 2 0 1\n"
        "R1 1 0 1\n"
        "R2 2 0 1\n"
        "K1 L1 L2 0.5\n");
    DescriptorSystem sys = assemble_mna(e);
    Eigen::MatrixXd expected(2, 2);
    expected << 1.0, 0.5, 0.5, 1.0;
    CHECK((sys.M - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("mutual inductance scales with sqrt(Li*Lj)") {
    ElementList e;
    e.inductors.push_back({"L1", "a", "0", 4.0, 0});
    e.inductors.push_back({"L2", "b", "0", 9.0, 0});
    e.capacitors.push_back({"C1", "a", "0", 1.0, 0});
    e.capacitors.push_back({"C2", "b", "0", 1.0, 0});
    e.mutual_couplings.push_back({"K1", "L1", "L2", 0.5, true, 0});
    DescriptorSystem sys = assemble_mna(e);
    CHECK(sys.M(0, 1) == doctest::Approx(0.5 * 6.0));
}

TEST_CASE("|k| = 1 coupling is degenerate") {
    ElementList e = parse_netlist(
        "L1 1 0 1\nL2 2 0 1\nC1 1 0 1\nC2 2 0 1\nK1 L1 L2 1\n");
    CHECK_THROWS_AS(assemble_mna(e), NumericalError);
}

TEST_CASE("grounding capacitance fills nodes without a capacitive path") {
    ElementList e = parse_netlist(
        "R1 1 2 1\n"
        "C1 1 0 1\n"
        "C2 2 3 1\n"  // 2-3 form a floating capacitor island
        "R2 3 0 1\n");
    AssemblyOptions opts;
    opts.grounding_capacitance = 1e-18;
    DescriptorSystem sys = assemble_mna(e, opts);
    Eigen::MatrixXd cn = dense(sys.Cn);
    CHECK(cn(1, 1) == doctest::Approx(1.0 + 1e-18));
    CHECK(cn(2, 2) == doctest::Approx(1.0 + 1e-18));
    CHECK(cn(0, 0) == 1.0);

    opts.grounding_capacitance = 0;
    try {
        assemble_mna(e, opts);
        FAIL("expected NumericalError");
    } catch (const NumericalError& err) {
        CHECK(err.code() == "singular_c");
        const std::string what = err.what();
        CHECK(what.find(" 2") != std::string::npos);
        CHECK(what.find(" 3") != std::string::npos);
    }
}

TEST_CASE("stamping is additive on a shared numbering") {
    ElementList a = parse_netlist("R1 1 2 2\nC1 1 0 1\nL1 2 0 1\n");
    ElementList b = parse_netlist("R2 2 3 4\nC2 3 0 2\nL2 3 1 5\n");

    ElementList both;
    both.resistors = a.resistors;
    both.resistors.insert(both.resistors.end(), b.resistors.begin(), b.resistors.end());
    both.capacitors = a.capacitors;
    both.capacitors.insert(both.capacitors.end(), b.capacitors.begin(), b.capacitors.end());
    both.inductors = a.inductors;
    both.inductors.insert(both.inductors.end(), b.inductors.begin(), b.inductors.end());

    const MnaNumbering numbering = derive_numbering(both);
    MnaStamps sa = stamp_elements(a, numbering);
    MnaStamps sb = stamp_elements(b, numbering);
    MnaStamps sum = stamp_elements(both, numbering);

    CHECK((dense(sum.Gn) - dense(sa.Gn) - dense(sb.Gn)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((dense(sum.Cn) - dense(sa.Cn) - dense(sb.Cn)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((sum.M - sa.M - sb.M).cwiseAbs().maxCoeff() == 0.0);
    CHECK((dense(sum.E) - dense(sa.E) - dense(sb.E)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("assembled C is positive definite on random probes") {
    test::Rng rng(42);
    ElementList e = test::rlc_ladder(6, 2, 1.0, 1.0, 1.0, 0.15);
    DescriptorSystem sys = assemble_mna(e);
    Eigen::MatrixXd c = dense(sys.C());
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int probe = 0; probe < 100; ++probe) {
        Eigen::VectorXd x(sys.order());
        for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = gauss(rng);
        CHECK(x.dot(c * x) > 0.0);
    }
}

TEST_CASE("node conductance block has a positive semidefinite symmetric part") {
    test::Rng rng(7);
    ElementList e = test::rc_mesh(4, 3, rng);
    DescriptorSystem sys = assemble_mna(e);
    Eigen::MatrixXd gn = -dense(sys.G).topLeftCorner(sys.nodes(), sys.nodes());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (gn + gn.transpose()));
    CHECK(es.eigenvalues().minCoeff() >= -1e-12 * es.eigenvalues().maxCoeff());
}

TEST_CASE("numeric checks pass for a healthy ladder") {
    ElementList e = test::rlc_ladder(4, 1, 1.0, 1.0, 1.0, 0.2);
    DescriptorSystem sys = assemble_mna(e);
    CHECK(sys.check_structure().empty());
    CHECK(sys.check_numerics().empty());
}

}  // TEST_SUITE
