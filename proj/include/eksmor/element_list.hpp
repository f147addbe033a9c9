// Copyright (c) 2026 The eksmor authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace eksmor {

struct Resistor {
    std::string name;
    std::string node_a, node_b;
    double ohms = 0;
    int line = 0;
};

struct Capacitor {
    std::string name;
    std::string node_a, node_b;
    double farads = 0;
    int line = 0;
};

/// Inductors own a branch current state; branch numbering follows the order
/// of this element's appearances.
struct Inductor {
    std::string name;
    std::string node_a, node_b;
    double henries = 0;
    int line = 0;
};

/// Coupling between two inductive branches, either as a dimensionless
/// coefficient |k| <= 1 or directly as a mutual inductance in henries
/// (M_ij^2 <= L_i * L_j).
struct MutualCoupling {
    std::string name;
    std::string inductor_a, inductor_b;
    double value = 0;
    bool is_coefficient = true;
    int line = 0;
};

/// Current-driven, voltage-observed port attached to a node.
struct Port {
    std::string name;
    std::string node;
    std::string ground = "0";
    int line = 0;
};

struct ElementList {
    std::vector<Resistor> resistors;
    std::vector<Capacitor> capacitors;
    std::vector<Inductor> inductors;
    std::vector<MutualCoupling> mutual_couplings;
    std::vector<Port> ports;

    /// Node names in order of first appearance in the source text, ground
    /// ("0") excluded. May be left empty for programmatically built lists;
    /// the numbering is then derived by scanning the element vectors.
    std::vector<std::string> node_order;
};

/// Checks the element invariants (finite positive values, |k| <= 1,
/// M_ij^2 <= L_i*L_j, couplings reference declared inductors, port nodes
/// exist, unique names). Throws ValidationError on the first violation.
void validate_elements(const ElementList& elems);

/// Parses the line-oriented netlist grammar:
///   R<name> n+ n- value      C<name> n+ n- value      L<name> n+ n- value
///   K<name> Lname1 Lname2 k  P<name> node             * comment
/// Values accept SI suffixes f p n u m k meg g (case-insensitive).
/// Throws ParseError with line/column positions, then validate_elements.
ElementList parse_netlist(const std::string& text);

}  // namespace eksmor
