// Exception types raised by the reptile core library.
#pragma once

#include <stdexcept>
#include <string>

namespace reptile {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Unsupported dimension or mismatched dimensions between operands.
class DimensionError : public Error {
  public:
    using Error::Error;
};

// A value violates a type invariant (bad permutation, wrong map count, ...).
class ValidationError : public Error {
  public:
    using Error::Error;
};

class ArgumentError : public Error {
  public:
    using Error::Error;
};

// Malformed input text; carries a 1-based line and column.
class ParseError : public Error {
  public:
    ParseError(const std::string& what, int line, int column)
        : Error(what + " at line " + std::to_string(line) + ", column " +
                std::to_string(column)),
          line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

  private:
    int line_;
    int column_;
};

// The neighbor graph hit its node budget before the question was settled.
class InconclusiveError : public Error {
  public:
    using Error::Error;
};

// Power iteration failed to converge; keeps the last eigenvalue estimate.
class NumericalError : public Error {
  public:
    NumericalError(const std::string& what, double last_estimate)
        : Error(what), last_estimate_(last_estimate) {}
    double last_estimate() const noexcept { return last_estimate_; }

  private:
    double last_estimate_;
};

// Requested work exceeds a hard guard (level too large, ...).
class ResourceError : public Error {
  public:
    using Error::Error;
};

class IoError : public Error {
  public:
    using Error::Error;
};

}  // namespace reptile
