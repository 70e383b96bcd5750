#pragma once

#include <stdexcept>
#include <string>

namespace idkit {

/// Triangular or factor diagonal is exactly (or sub-tolerance) zero.
class SingularMatrixError : public std::runtime_error {
public:
    explicit SingularMatrixError(const std::string& what) : std::runtime_error(what) {}
};

/// Cholesky hit a non-positive pivot; the input is not positive definite.
class NotPositiveDefiniteError : public std::runtime_error {
public:
    explicit NotPositiveDefiniteError(const std::string& what) : std::runtime_error(what) {}
};

/// An iterative factorization exhausted its sweep budget.
class ConvergenceError : public std::runtime_error {
public:
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed text input; the message names the offending line.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed binary input (bad magic, truncated payload, short counts).
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

class FileNotFoundError : public std::runtime_error {
public:
    explicit FileNotFoundError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace idkit
