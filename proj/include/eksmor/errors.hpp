// Copyright (c) 2026 The eksmor authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace eksmor {

/// Base error type. `code()` is a short machine-readable tag which the CLI
/// maps onto exit codes and JSON error records.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

/// Malformed input text (netlist or matrix file). Positions are 1-based;
/// column 0 means "whole line".
class ParseError : public Error {
public:
    ParseError(const std::string& message, int line, int column = 0)
        : Error("parse", message + " (line " + std::to_string(line) +
                             (column > 0 ? ", column " + std::to_string(column) : "") + ")"),
          line_(line),
          column_(column) {}
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

/// Structurally invalid model: dimension mismatch, symmetry violation,
/// broken element invariants.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// File system failure.
class IoError : public Error {
public:
    explicit IoError(const std::string& message) : Error("io", message) {}
};

/// Numerical failure: unstable model, singular factorization, non-convergence.
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace eksmor
