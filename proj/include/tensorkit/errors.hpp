#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tensorkit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tensor order exceeds the supported maximum.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Index arity, index range or slot selection is wrong.
class IndexError : public Error {
 public:
  using Error::Error;
};

/// Operands have incompatible valency or dimension.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Transition matrix (or Jacobian) is singular.
class DegenerateTransition : public Error {
 public:
  using Error::Error;
};

/// Metric is not symmetric positive definite.
class DegenerateMetric : public Error {
 public:
  using Error::Error;
};

/// Construction is only defined in a particular dimension.
class UnsupportedDimension : public Error {
 public:
  using Error::Error;
};

/// Evaluation point lies outside the domain of a field or chart.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid scalar parameter (step size, wave speed, chart name, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Syntax error in an index-notation formula.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error(message + " at offset " + std::to_string(position)), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Formula refers to a symbol with no bound tensor.
class BindingError : public Error {
 public:
  using Error::Error;
};

/// Formula violates the index placement rules and cannot be evaluated.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace tensorkit
