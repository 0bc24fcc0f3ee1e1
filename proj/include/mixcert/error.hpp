#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mixcert {

enum class ErrorKind {
    NotSquare,
    NegativeEntry,
    RowSumError,
    DimensionMismatch,
    NotUniquelyErgodic,
    IndexOutOfRange,
    DiagonalPair,
    ConvergenceFailure,
    ZeroMass,
    ParameterOutOfRange,
    TrivialStart,
    ParseError,
    IoError,
    InvariantViolation,
};

/// Base of every error raised by the library. `kind()` lets front ends map
/// failures to exit codes without a catch clause per type.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class NotSquare : public Error {
public:
    explicit NotSquare(const std::string& what) : Error(ErrorKind::NotSquare, what) {}
};

class NegativeEntry : public Error {
public:
    NegativeEntry(std::size_t row, std::size_t col)
        : Error(ErrorKind::NegativeEntry,
                "negative entry at (" + std::to_string(row) + ", " + std::to_string(col) + ")"),
          row_(row), col_(col) {}

    std::size_t row() const noexcept { return row_; }
    std::size_t col() const noexcept { return col_; }

private:
    std::size_t row_;
    std::size_t col_;
};

class RowSumError : public Error {
public:
    RowSumError(std::size_t row, double sum)
        : Error(ErrorKind::RowSumError,
                "row " + std::to_string(row) + " sums to " + std::to_string(sum) + ", expected 1"),
          row_(row), sum_(sum) {}

    std::size_t row() const noexcept { return row_; }
    double sum() const noexcept { return sum_; }

private:
    std::size_t row_;
    double sum_;
};

class DimensionMismatch : public Error {
public:
    DimensionMismatch(std::size_t expected, std::size_t got)
        : Error(ErrorKind::DimensionMismatch, "dimension mismatch: expected " +
                                                  std::to_string(expected) + ", got " +
                                                  std::to_string(got)) {}
};

class NotUniquelyErgodic : public Error {
public:
    explicit NotUniquelyErgodic(const std::string& why)
        : Error(ErrorKind::NotUniquelyErgodic, "chain is not uniquely ergodic: " + why) {}
};

class IndexOutOfRange : public Error {
public:
    IndexOutOfRange(std::size_t index, std::size_t n)
        : Error(ErrorKind::IndexOutOfRange, "state index " + std::to_string(index) +
                                                " out of range for " + std::to_string(n) +
                                                " states") {}
};

class DiagonalPair : public Error {
public:
    explicit DiagonalPair(std::size_t i)
        : Error(ErrorKind::DiagonalPair,
                "pair (" + std::to_string(i) + ", " + std::to_string(i) + ") is on the diagonal") {}
};

class ConvergenceFailure : public Error {
public:
    explicit ConvergenceFailure(long iterations)
        : Error(ErrorKind::ConvergenceFailure,
                "eigenvalue iteration did not converge within " + std::to_string(iterations) +
                    " iterations"),
          iterations_(iterations) {}

    long iterations() const noexcept { return iterations_; }

private:
    long iterations_;
};

class ZeroMass : public Error {
public:
    explicit ZeroMass(std::size_t i)
        : Error(ErrorKind::ZeroMass, "stationary mass of state " + std::to_string(i) + " is zero") {}
};

class ParameterOutOfRange : public Error {
public:
    explicit ParameterOutOfRange(const std::string& what)
        : Error(ErrorKind::ParameterOutOfRange, what) {}
};

class TrivialStart : public Error {
public:
    explicit TrivialStart(std::size_t x)
        : Error(ErrorKind::TrivialStart, "both copies start in state " + std::to_string(x) +
                                             "; the coupling is trivial") {}
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(ErrorKind::IoError, what) {}
};

class InvariantViolation : public Error {
public:
    explicit InvariantViolation(const std::string& what)
        : Error(ErrorKind::InvariantViolation, "report invariant violated: " + what) {}
};

}  // namespace mixcert
