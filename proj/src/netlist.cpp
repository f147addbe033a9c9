// Copyright (c) 2026 The eksmor authors
// SPDX-License-Identifier: Apache-2.0
#include "eksmor/element_list.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <string_view>

#include "eksmor/errors.hpp"

namespace eksmor {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

struct Token {
    std::string text;
    int column;  // 1-based
};

std::vector<Token> tokenize(const std::string& line) {
    std::vector<Token> tokens;
    size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i >= line.size()) break;
        size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        tokens.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
    }
    return tokens;
}

double si_multiplier(std::string_view suffix, int line, int column) {
    const std::string s = lower(suffix);
    if (s.empty()) return 1.0;
    if (s == "meg") return 1e6;
    if (s == "f") return 1e-15;
    if (s == "p") return 1e-12;
    if (s == "n") return 1e-9;
    if (s == "u") return 1e-6;
    if (s == "m") return 1e-3;
    if (s == "k") return 1e3;
    if (s == "g") return 1e9;
    throw ParseError("unknown SI suffix '" + std::string(suffix) + "'", line, column);
}

double parse_value(const Token& tok, int line) {
    const std::string& t = tok.text;
    double mantissa = 0;
    const char* begin = t.data();
    const char* end = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(begin, end, mantissa);
    if (ec != std::errc() || ptr == begin)
        throw ParseError("expected a numeric value, got '" + t + "'", line, tok.column);
    const std::string_view suffix(ptr, static_cast<size_t>(end - ptr));
    return mantissa * si_multiplier(suffix, line, tok.column);
}

void expect_tokens(const std::vector<Token>& toks, size_t count, const char* what, int line) {
    if (toks.size() < count)
        throw ParseError(std::string(what) + " expects " + std::to_string(count - 1) +
                             " fields after the name",
                         line, toks.empty() ? 1 : toks.back().column);
    if (toks.size() > count)
        throw ParseError("unexpected trailing field '" + toks[count].text + "'", line,
                         toks[count].column);
}

}  // namespace

ElementList parse_netlist(const std::string& text) {
    ElementList elems;
    std::set<std::string> names;     // case-insensitive uniqueness
    std::set<std::string> node_set;  // nodes already recorded in node_order

    auto note_node = [&](const std::string& node) {
        if (node == "0") return;
        if (node_set.insert(node).second) elems.node_order.push_back(node);
    };
    auto note_name = [&](const std::string& name, int line, int column) {
        if (!names.insert(lower(name)).second)
            throw ParseError("duplicate element name '" + name + "'", line, column);
    };

    std::istringstream stream(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(stream, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        auto toks = tokenize(raw);
        if (toks.empty()) continue;
        if (toks[0].text[0] == '*') continue;  // comment line

        const Token& head = toks[0];
        if (head.text.size() < 2)
            throw ParseError("element name '" + head.text + "' needs a suffix after its type letter",
                             line_no, head.column);
        const char kind = static_cast<char>(std::tolower(static_cast<unsigned char>(head.text[0])));
        switch (kind) {
            case 'r': {
                expect_tokens(toks, 4, "resistor", line_no);
                note_name(head.text, line_no, head.column);
                const double v = parse_value(toks[3], line_no);
                if (!(v > 0))
                    throw ParseError("non-positive resistance " + toks[3].text, line_no,
                                     toks[3].column);
                elems.resistors.push_back({head.text, toks[1].text, toks[2].text, v, line_no});
                note_node(toks[1].text);
                note_node(toks[2].text);
                break;
            }
            case 'c': {
                expect_tokens(toks, 4, "capacitor", line_no);
                note_name(head.text, line_no, head.column);
                const double v = parse_value(toks[3], line_no);
                if (!(v > 0))
                    throw ParseError("non-positive capacitance " + toks[3].text, line_no,
                                     toks[3].column);
                elems.capacitors.push_back({head.text, toks[1].text, toks[2].text, v, line_no});
                note_node(toks[1].text);
                note_node(toks[2].text);
                break;
            }
            case 'l': {
                expect_tokens(toks, 4, "inductor", line_no);
                note_name(head.text, line_no, head.column);
                const double v = parse_value(toks[3], line_no);
                if (!(v > 0))
                    throw ParseError("non-positive inductance " + toks[3].text, line_no,
                                     toks[3].column);
                elems.inductors.push_back({head.text, toks[1].text, toks[2].text, v, line_no});
                note_node(toks[1].text);
                note_node(toks[2].text);
                break;
            }
            case 'k': {
                expect_tokens(toks, 4, "mutual coupling", line_no);
                note_name(head.text, line_no, head.column);
                const double k = parse_value(toks[3], line_no);
                if (std::abs(k) > 1.0)
                    throw ParseError("coupling coefficient " + toks[3].text + " outside [-1, 1]",
                                     line_no, toks[3].column);
                elems.mutual_couplings.push_back(
                    {head.text, toks[1].text, toks[2].text, k, true, line_no});
                break;
            }
            case 'p': {
                expect_tokens(toks, 2, "port", line_no);
                note_name(head.text, line_no, head.column);
                elems.ports.push_back({head.text, toks[1].text, "0", line_no});
                break;
            }
            default:
                throw ParseError("unknown element type '" + std::string(1, head.text[0]) + "'",
                                 line_no, head.column);
        }
    }

    validate_elements(elems);
    return elems;
}

void validate_elements(const ElementList& elems) {
    auto bad = [](const std::string& name, int line, const std::string& why) {
        std::string at = line > 0 ? " (line " + std::to_string(line) + ")" : "";
        return ValidationError("invalid_element", "element " + name + ": " + why + at);
    };

    std::set<std::string> names;
    auto unique_name = [&](const std::string& name, int line) {
        if (!names.insert(lower(name)).second) throw bad(name, line, "duplicate name");
    };

    std::map<std::string, double> inductance;  // lower-case name -> henries
    std::set<std::string> nodes;
    for (const auto& r : elems.resistors) {
        unique_name(r.name, r.line);
        if (!std::isfinite(r.ohms) || r.ohms <= 0) throw bad(r.name, r.line, "non-positive resistance");
        nodes.insert(r.node_a);
        nodes.insert(r.node_b);
    }
    for (const auto& c : elems.capacitors) {
        unique_name(c.name, c.line);
        if (!std::isfinite(c.farads) || c.farads <= 0)
            throw bad(c.name, c.line, "non-positive capacitance");
        nodes.insert(c.node_a);
        nodes.insert(c.node_b);
    }
    for (const auto& l : elems.inductors) {
        unique_name(l.name, l.line);
        if (!std::isfinite(l.henries) || l.henries <= 0)
            throw bad(l.name, l.line, "non-positive inductance");
        nodes.insert(l.node_a);
        nodes.insert(l.node_b);
        inductance[lower(l.name)] = l.henries;
    }
    for (const auto& k : elems.mutual_couplings) {
        unique_name(k.name, k.line);
        if (!std::isfinite(k.value)) throw bad(k.name, k.line, "non-finite coupling");
        auto ia = inductance.find(lower(k.inductor_a));
        auto ib = inductance.find(lower(k.inductor_b));
        if (ia == inductance.end())
            throw bad(k.name, k.line, "references undeclared inductor '" + k.inductor_a + "'");
        if (ib == inductance.end())
            throw bad(k.name, k.line, "references undeclared inductor '" + k.inductor_b + "'");
        if (ia == ib) throw bad(k.name, k.line, "couples an inductor to itself");
        if (k.is_coefficient) {
            if (std::abs(k.value) > 1.0)
                throw bad(k.name, k.line, "coupling coefficient outside [-1, 1]");
        } else {
            if (k.value * k.value > ia->second * ib->second)
                throw bad(k.name, k.line, "mutual inductance exceeds sqrt(L_i * L_j)");
        }
    }
    for (const auto& p : elems.ports) {
        unique_name(p.name, p.line);
        if (p.node == p.ground) throw bad(p.name, p.line, "port attached to ground");
        if (!nodes.count(p.node))
            throw bad(p.name, p.line, "port node '" + p.node + "' does not appear in any element");
    }
}

}  // namespace eksmor
