#pragma once

#include <stdexcept>
#include <string>

namespace stochord {

/// Invalid model parameters (negative sd, weights not summing to one, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed or missing input data. Carries the offending line when known.
class IngestionError : public std::runtime_error {
 public:
  explicit IngestionError(const std::string& what, long line = 0)
      : std::runtime_error(what), line_(line) {}
  [[nodiscard]] long line() const noexcept { return line_; }

 private:
  long line_;
};

/// A theoretical assumption required by an asymptotic result does not hold
/// (e.g. equal densities at a crossing point).
class AssumptionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace stochord
