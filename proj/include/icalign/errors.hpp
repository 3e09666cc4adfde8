#pragma once

#include <stdexcept>
#include <string>

namespace icalign {

// Thrown when an input violates a documented precondition (shape, rank,
// Hermiticity, configuration constraints).
class ContractViolation : public std::invalid_argument {
public:
    explicit ContractViolation(const std::string& what) : std::invalid_argument(what) {}
};

// Thrown when a matrix that must be invertible / positive definite is
// numerically singular. The message names the offending matrix.
class SingularMatrix : public std::runtime_error {
public:
    explicit SingularMatrix(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when an iterative numeric procedure fails to make progress
// (e.g. a bracketing search exhausts its expansion budget). Carries
// diagnostics in the message.
class NumericFailure : public std::runtime_error {
public:
    explicit NumericFailure(const std::string& what) : std::runtime_error(what) {}
};

} // namespace icalign
