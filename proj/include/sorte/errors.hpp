#pragma once

#include <stdexcept>
#include <string>

namespace sorte {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A scenario document is structurally malformed (missing keys, wrong types).
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Input data violates a model invariant (probabilities, partitions, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Vector or matrix sizes do not match the model.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the mathematical domain of the function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An agent or scenario index is out of range, or a group is empty.
class IndexError : public Error {
 public:
  using Error::Error;
};

/// A density does not integrate to one.
class NormalizationError : public Error {
 public:
  using Error::Error;
};

/// An iterative solve exhausted its iteration budget.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A sign-changing bracket could not be established for a scalar root.
class BracketError : public Error {
 public:
  using Error::Error;
};

/// The dual minimizer is pushed to the boundary of its domain; the model is
/// inconsistent (the unconstrained supremum of the utilities is attained).
class BoundaryError : public Error {
 public:
  using Error::Error;
};

/// The instance is too large for an exhaustive or brute-force routine.
class ScaleError : public Error {
 public:
  using Error::Error;
};

/// The requested operation is not defined for this constraint family.
class SpecError : public Error {
 public:
  using Error::Error;
};

}  // namespace sorte
