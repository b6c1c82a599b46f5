#pragma once

#include <stdexcept>
#include <string>

namespace hdgc {

enum class ErrorKind {
  validation,  // bad input, query, or configuration
  numeric,     // non-finite data, non-convergence
  infeasible,  // not enough observations for the requested test
};

/// Base of every exception thrown by the library. The kind drives the CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(ErrorKind::validation, what) {}
};

class ParseError : public ValidationError {
 public:
  ParseError(const std::string& what, long row, std::string column)
      : ValidationError(what), row_(row), column_(std::move(column)) {}
  long row() const noexcept { return row_; }
  const std::string& column() const noexcept { return column_; }

 private:
  long row_;
  std::string column_;
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error(ErrorKind::numeric, what) {}
};

class ConvergenceError : public NumericError {
 public:
  ConvergenceError(const std::string& what, double kkt_gap) : NumericError(what), kkt_gap_(kkt_gap) {}
  double kkt_gap() const noexcept { return kkt_gap_; }

 private:
  double kkt_gap_;
};

class InfeasibleError : public Error {
 public:
  explicit InfeasibleError(const std::string& what) : Error(ErrorKind::infeasible, what) {}
};

}  // namespace hdgc
