#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dnglue {

/// Invalid graph, potential or matrix input (bad index, loop, duplicate edge...).
class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Text input that could not be parsed. Carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Exhaustive enumeration refused or aborted because it would exceed its work limit.
class ResourceExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Geometry or parameter outside the domain of an analytic formula.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical failure: singular/ill-conditioned systems, truncation that does
/// not converge, asymmetry above tolerance.
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what, double diagnostic = 0.0)
      : std::runtime_error(what), diagnostic_(diagnostic) {}

  /// Condition estimate, residual or defect that triggered the failure.
  double diagnostic() const noexcept { return diagnostic_; }

 private:
  double diagnostic_;
};

}  // namespace dnglue
