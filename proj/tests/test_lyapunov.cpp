// Copyright (c) 2026 The eksmor authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>

#include "eksmor/errors.hpp"
#include "eksmor/lyapunov.hpp"
#include "support.hpp"

using namespace eksmor;

namespace {

// Independent oracle for diagonal A: the equation decouples entrywise into
// X_ij = (W W^T)_ij / (-a_i - a_j).
Eigen::MatrixXd diagonal_oracle(const Eigen::VectorXd& a, const Eigen::MatrixXd& W) {
    const Eigen::MatrixXd rhs = W * W.transpose();
    Eigen::MatrixXd X(a.size(), a.size());
    for (Eigen::Index i = 0; i < a.size(); ++i)
        for (Eigen::Index j = 0; j < a.size(); ++j) X(i, j) = rhs(i, j) / (-a(i) - a(j));
    return X;
}

}  // namespace

TEST_SUITE("lyapunov") {

TEST_CASE("scalar: A = [-1], W = [sqrt(2)] gives X = [1]") {
    Eigen::MatrixXd A(1, 1), W(1, 1);
    A << -1.0;
    W << std::sqrt(2.0);
    Eigen::MatrixXd X = solve_lyapunov_dense(A, W);
    CHECK(X(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("diagonal A against the entrywise oracle") {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2, 2);
    A(0, 0) = -1.0;
    A(1, 1) = -2.0;
    Eigen::MatrixXd W(2, 1);
    W << 1.0, 1.0;
    Eigen::MatrixXd X = solve_lyapunov_dense(A, W);
    // oracle: X = [[1/2, 1/3], [1/3, 1/4]]
    Eigen::MatrixXd expected = diagonal_oracle(Eigen::Vector2d(-1.0, -2.0), W);
    CHECK(expected(0, 0) == 0.5);
    CHECK(expected(0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(expected(1, 1) == 0.25);
    CHECK((X - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("bigger diagonal systems match the oracle") {
    test::Rng rng(5);
    std::uniform_real_distribution<double> uni(0.1, 10.0);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng() % 12);
        const Eigen::Index w = 1 + static_cast<Eigen::Index>(rng() % 3);
        Eigen::VectorXd a(n);
        for (Eigen::Index i = 0; i < n; ++i) a(i) = -uni(rng);
        Eigen::MatrixXd W(n, w);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < w; ++j) W(i, j) = uni(rng) - 5.0;
        Eigen::MatrixXd X = solve_lyapunov_dense(Eigen::MatrixXd(a.asDiagonal()), W);
        Eigen::MatrixXd expected = diagonal_oracle(a, W);
        CHECK((X - expected).cwiseAbs().maxCoeff() <=
              1e-12 * expected.cwiseAbs().maxCoeff() + 1e-300);
    }
}

TEST_CASE("random stable 5x5: residual at round-off level") {
    test::Rng rng(17);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    Eigen::MatrixXd A(5, 5);
    for (Eigen::Index i = 0; i < 5; ++i)
        for (Eigen::Index j = 0; j < 5; ++j) A(i, j) = uni(rng);
    A.diagonal().array() -= 5.0;
    Eigen::MatrixXd W(5, 2);
    for (Eigen::Index i = 0; i < 5; ++i)
        for (Eigen::Index j = 0; j < 2; ++j) W(i, j) = uni(rng);
    Eigen::MatrixXd X = solve_lyapunov_dense(A, W);
    CHECK(lyapunov_residual(A, X, W) <= 1e-12);
    CHECK((X - X.transpose()).cwiseAbs().maxCoeff() == 0.0);  // symmetrized exactly
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(X);
    CHECK(es.eigenvalues().minCoeff() >= -1e-12 * es.eigenvalues().maxCoeff());
}

TEST_CASE("complex spectra exercise the 2x2 Schur blocks") {
    test::Rng rng(23);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        const Eigen::Index n = 6 + static_cast<Eigen::Index>(rng() % 10);
        Eigen::MatrixXd A(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) A(i, j) = gauss(rng);
        A = 0.2 * (A - A.transpose());  // strong rotational part
        A.diagonal().array() -= 1.0;
        Eigen::MatrixXd W(n, 1);
        for (Eigen::Index i = 0; i < n; ++i) W(i, 0) = gauss(rng);
        Eigen::MatrixXd X = solve_lyapunov_dense(A, W);
        CHECK(lyapunov_residual(A, X, W) <= 1e-12);
    }
}

TEST_CASE("unstable A is refused with a diagnostic") {
    Eigen::MatrixXd A(2, 2), W(2, 1);
    A << 1.0, 0.0, 0.0, -1.0;
    W << 1.0, 1.0;
    try {
        solve_lyapunov_dense(A, W);
        FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
        CHECK(e.code() == "unstable");
    }
}

TEST_CASE("marginal eigenvalue inside the stability margin is refused") {
    Eigen::MatrixXd A(2, 2), W(2, 1);
    A << -1e-16, 0.0, 0.0, -1.0;
    W << 1.0, 1.0;
    CHECK_THROWS_AS(solve_lyapunov_dense(A, W), NumericalError);
}

TEST_CASE("dimension checks") {
    Eigen::MatrixXd A = -Eigen::MatrixXd::Identity(3, 3);
    Eigen::MatrixXd W = Eigen::MatrixXd::Ones(2, 1);
    CHECK_THROWS_AS(solve_lyapunov_dense(A, W), ValidationError);
    CHECK_THROWS_AS(solve_lyapunov_dense(Eigen::MatrixXd(0, 0), Eigen::MatrixXd(0, 0)),
                    ValidationError);
}

}  // TEST_SUITE
