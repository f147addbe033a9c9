// Copyright (c) 2026 The eksmor authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "eksmor/element_list.hpp"
#include "eksmor/errors.hpp"

using namespace eksmor;

TEST_SUITE("netlist") {

TEST_CASE("single resistor line") {
    ElementList e = parse_netlist("R1 1 0 50.0\nC1 1 0 1\n");
    REQUIRE(e.resistors.size() == 1);
    CHECK(e.resistors[0].name == "R1");
    CHECK(e.resistors[0].node_a == "1");
    CHECK(e.resistors[0].node_b == "0");
    CHECK(e.resistors[0].ohms == 50.0);
    CHECK(e.resistors[0].line == 1);
}

TEST_CASE("mutual coupling referencing declared inductors") {
    ElementList e = parse_netlist(
        "L1 1 0 1\n"
        "L2 2 0 1\n"
        "C1 1 0 1\nC2 2 0 1\n"
        "K1 L1 L2 0.9\n");
    REQUIRE(e.mutual_couplings.size() == 1);
    CHECK(e.mutual_couplings[0].inductor_a == "L1");
    CHECK(e.mutual_couplings[0].inductor_b == "L2");
    CHECK(e.mutual_couplings[0].value == 0.9);
    CHECK(e.mutual_couplings[0].is_coefficient);
}

TEST_CASE("non-positive resistance is rejected with its position") {
    try {
        parse_netlist("R1 1 0 -5\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
        CHECK(std::string(e.what()).find("non-positive resistance") != std::string::npos);
    }
}

TEST_CASE("SI suffixes") {
    ElementList e = parse_netlist(
        "R1 a 0 2k\n"
        "R2 a 0 3MEG\n"
        "R3 a 0 1.5m\n"
        "C1 a 0 2p\n"
        "C2 a 0 1f\n"
        "C3 a 0 4n\n"
        "L1 a 0 3u\n"
        "L2 a 0 1g\n");
    CHECK(e.resistors[0].ohms == doctest::Approx(2e3));
    CHECK(e.resistors[1].ohms == doctest::Approx(3e6));
    CHECK(e.resistors[2].ohms == doctest::Approx(1.5e-3));
    CHECK(e.capacitors[0].farads == doctest::Approx(2e-12));
    CHECK(e.capacitors[1].farads == doctest::Approx(1e-15));
    CHECK(e.capacitors[2].farads == doctest::Approx(4e-9));
    CHECK(e.inductors[0].henries == doctest::Approx(3e-6));
    CHECK(e.inductors[1].henries == doctest::Approx(1e9));
}

TEST_CASE("comments and blank lines are skipped, prefixes case-insensitive") {
    ElementList e = parse_netlist(
        "* a comment\n"
        "\n"
        "r1 in out 1\n"
        "c1 out 0 1\n"
        "p1 in\n");
    CHECK(e.resistors.size() == 1);
    CHECK(e.capacitors.size() == 1);
    REQUIRE(e.ports.size() == 1);
    CHECK(e.ports[0].node == "in");
    CHECK(e.ports[0].ground == "0");
}

TEST_CASE("node order follows first appearance, ground excluded") {
    ElementList e = parse_netlist(
        "R1 b a 1\n"
        "C1 a 0 1\n"
        "C2 c 0 1\n"
        "R2 a c 1\n");
    REQUIRE(e.node_order.size() == 3);
    CHECK(e.node_order[0] == "b");
    CHECK(e.node_order[1] == "a");
    CHECK(e.node_order[2] == "c");
}

TEST_CASE("coupling to an undeclared inductor") {
    try {
        parse_netlist("L1 1 0 1\nC1 1 0 1\nK1 L1 L9 0.5\n");
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("undeclared inductor") != std::string::npos);
    }
}

TEST_CASE("duplicate element names") {
    try {
        parse_netlist("R1 1 0 1\nR1 2 0 2\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("coupling coefficient outside [-1, 1]") {
    CHECK_THROWS_AS(parse_netlist("L1 1 0 1\nL2 2 0 1\nK1 L1 L2 1.5\n"), ParseError);
}

TEST_CASE("column position of a bad token") {
    try {
        parse_netlist("R1 1 0 abc\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
        CHECK(e.column() == 8);
    }
}

TEST_CASE("trailing junk is a syntax error") {
    CHECK_THROWS_AS(parse_netlist("R1 1 0 5 extra\n"), ParseError);
}

TEST_CASE("port at an unknown node or at ground") {
    CHECK_THROWS_AS(parse_netlist("R1 1 0 1\nP1 7\n"), ValidationError);
    CHECK_THROWS_AS(parse_netlist("R1 1 0 1\nP1 0\n"), ValidationError);
}

TEST_CASE("mutual inductance in henries must satisfy M^2 <= Li*Lj") {
    ElementList e;
    e.inductors.push_back({"L1", "a", "0", 1.0, 0});
    e.inductors.push_back({"L2", "b", "0", 4.0, 0});
    e.mutual_couplings.push_back({"K1", "L1", "L2", 2.0, false, 0});
    CHECK_NOTHROW(validate_elements(e));  // M = 2, Li*Lj = 4: boundary holds
    e.mutual_couplings[0].value = 2.1;
    CHECK_THROWS_AS(validate_elements(e), ValidationError);
}

}  // TEST_SUITE
