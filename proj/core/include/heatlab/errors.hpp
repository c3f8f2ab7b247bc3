#pragma once

#include <stdexcept>
#include <string>

namespace heatlab {

/// Input outside the mathematical domain of an operation (negative radius,
/// t <= 0, distance beyond the injectivity radius).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed arguments: too few samples, mismatched dimensions, bad grids.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The requested quantity is not available for this model.
class CapabilityError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Base for every numerical failure; the CLI maps these to exit code 3.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class QuadratureError : public NumericError {
 public:
  QuadratureError(const std::string& what, double bestValue, double bestEstimate)
      : NumericError(what), value_(bestValue), errorEstimate_(bestEstimate) {}

  double value() const noexcept { return value_; }
  double errorEstimate() const noexcept { return errorEstimate_; }

 private:
  double value_;
  double errorEstimate_;
};

class SeriesError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Two independent routes to the same quantity disagree.
class ConsistencyError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace heatlab
