#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace cluster_bifurc {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain (non-positive length,
/// area or volume, invalid potential parameters).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The caller asked for something that does not make sense
/// (bad derivative order, inverted interval, wrong potential family).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// A configuration document is malformed. key() names the offending field.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error("config error at '" + key + "': " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// Base of numerical failures (exit code 3 in the CLI).
class NumericalError : public Error {
 public:
  using Error::Error;
};

class SingularSystemError : public NumericalError {
 public:
  SingularSystemError(int pivot, const std::string& what)
      : NumericalError(what), pivot_(pivot) {}
  int pivot_index() const noexcept { return pivot_; }

 private:
  int pivot_;
};

/// The constraint gradient vanishes, so there is no tangent space.
class DegenerateConstraintError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Newton did not converge within the iteration budget.
class CorrectorFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// An iterate left the feasible set (edge <= 0, triangle or tetrahedron lost).
class DomainExit : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A branch could not even take its first step.
class TraceAbort : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Group construction failed closure (wrong generator convention).
class ConstructionError : public Error {
 public:
  using Error::Error;
};

}  // namespace cluster_bifurc
