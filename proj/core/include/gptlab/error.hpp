#pragma once

#include <stdexcept>
#include <string>

namespace gptlab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live in ambient spaces of different dimension.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An argument is outside the mathematical domain of the operation
/// (e.g. weights that are not a probability vector).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The operation is not defined for the state-space representation at hand.
class UnsupportedRepresentation : public Error {
 public:
  using Error::Error;
};

/// Input failed structural validation (non-extreme vertices, rank deficit, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Conditioning on an outcome whose probability is not positive.
class ZeroProbabilityConditioning : public Error {
 public:
  using Error::Error;
};

/// The effect never reaches value 1 on the state space.
class NoFaceError : public Error {
 public:
  using Error::Error;
};

/// A transformation did not map the state space into itself.
class InvalidGroupDescriptor : public Error {
 public:
  using Error::Error;
};

/// A search or enumeration ran past its configured budget.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(std::string stage, const std::string& what)
      : Error(what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace gptlab
