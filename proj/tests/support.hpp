// Copyright (c) 2026 The eksmor authors
// SPDX-License-Identifier: Apache-2.0
//
// Shared fixtures: deterministic circuit generators, random stable systems,
// and a strict Touchstone v1 reader used as the format oracle.
#pragma once

#include <Eigen/Dense>

#include <random>
#include <string>
#include <vector>

#include "eksmor/descriptor_system.hpp"
#include "eksmor/eks.hpp"
#include "eksmor/element_list.hpp"
#include "eksmor/mna.hpp"

namespace eksmor::test {

using Rng = std::mt19937_64;

/// Series-R ladder with shunt capacitors and a resistive termination;
/// port at the head. N = sections states.
ElementList rc_ladder(int sections, double r = 1.0, double c = 1.0, double r_term = 1.0);

/// Ladder of parallel R||L segments with shunt capacitors, `chains` parallel
/// copies with one port each. k != 0 couples adjacent inductors within a
/// chain and segment-by-segment across neighboring chains (keep |k| < 0.2
/// for multi-chain builds so M stays positive definite).
/// N = chains * (2 * sections + 1) states.
ElementList rlc_ladder(int sections, int chains = 1, double r = 1.0, double l = 1.0,
                       double c = 1.0, double k = 0.0, double r_term = 1.0);

/// Same ladder family with an individual section count per chain
/// (one port per chain). N = sum over chains of (2 * sections_i + 1).
ElementList rlc_ladder_chains(const std::vector<int>& sections, double r = 1.0, double l = 1.0,
                              double c = 1.0, double k = 0.0, double r_term = 1.0);

/// Rectangular RC grid with random element values; up to four ports on the
/// corners. N = width * height states.
ElementList rc_mesh(int width, int height, Rng& rng, int nports = 2);

/// Dense random system with C symmetric positive definite and C^{-1}G
/// strictly diagonally dominant stable. States are all "nodes" (m = 0).
DescriptorSystem random_stable_system(Eigen::Index n, Eigen::Index p, Eigen::Index q, Rng& rng);

/// DescriptorSystem from explicit dense matrices (all states as nodes).
DescriptorSystem system_from_dense(const Eigen::MatrixXd& G, const Eigen::MatrixXd& C,
                                   const Eigen::MatrixXd& B, const Eigen::MatrixXd& L,
                                   bool admittance = false);

/// Dense materialization of the operator a SystemOperator applies:
/// (A, rhs) with A = C^{-1}G or its transpose and the matching block.
struct DenseOperator {
    Eigen::MatrixXd A;
    Eigen::MatrixXd rhs;
};
DenseOperator dense_operator(const DescriptorSystem& sys, GramianSide side);

/// Same for the Cholesky-whitened realization A_hat = Lc^{-1} G Lc^{-T}
/// (or its transpose) with C = Lc Lc^T from a plain dense Cholesky. Any
/// square root gives the same residual norms as the library's internal one.
DenseOperator dense_whitened_operator(const DescriptorSystem& sys, GramianSide side);

/// Serializes an element list back to the netlist grammar (full precision).
std::string to_netlist(const ElementList& elems);

/// One record of a Touchstone v1 file.
struct TouchstoneRecord {
    double freq_hz = 0;
    Eigen::MatrixXcd s;
};

struct TouchstoneData {
    double z0 = 0;
    std::vector<TouchstoneRecord> records;
};

/// Strict reader for the subset of Touchstone v1 this project writes:
/// `# HZ S RI R <z0>`, 2-port column order S11 S21 S12 S22, larger networks
/// row per line wrapped at four pairs. Throws std::runtime_error on any
/// grammar violation.
TouchstoneData touchstone_parse(const std::string& path, Eigen::Index nports);

}  // namespace eksmor::test
