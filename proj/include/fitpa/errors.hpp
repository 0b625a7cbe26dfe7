#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fitpa {

/// Violation of a TemporalNetwork construction contract (unknown node,
/// time regression, self-loop, direction mismatch).
class NetworkError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file. Carries the 1-based line number when known.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Estimation cannot proceed: no selections, degenerate bins, too few bins
/// for an exponent fit.
class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A result does not cover a node that the metric needs.
class CoverageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fitpa
