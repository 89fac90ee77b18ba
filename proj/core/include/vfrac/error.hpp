#pragma once

#include <stdexcept>
#include <string>

namespace vfrac {

/// Argument outside the mathematical domain of an operation (negative speed, V <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Query outside the range covered by tabulated data.
class OutOfRangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Malformed or inconsistent configuration (unknown keys, violated invariants).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Iterative or direct solve that did not meet its residual contract.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double residual)
      : std::runtime_error(what + " (final residual " + std::to_string(residual) + ")"),
        residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Crack-tip history without a stationary stretch of increments.
class NoSteadyWindowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vfrac
