#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace compdeco {

/// Base of every error raised by the engine.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// One or more parameter invariants were violated. `fields()` names each offender.
class ConfigError : public Error {
public:
  ConfigError(const std::string& what, std::vector<std::string> fields = {})
      : Error(what), fields_(std::move(fields)) {}
  const std::vector<std::string>& fields() const noexcept { return fields_; }

private:
  std::vector<std::string> fields_;
};

/// Harmonic boundary-value problem evaluated at (or too close to) freq*t = n*pi.
class CausticError : public Error {
public:
  using Error::Error;
};

/// Argument outside the mathematical domain of a formula.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Quadrature refinement could not reach the requested tolerance.
class NumericalAccuracyError : public Error {
public:
  using Error::Error;
};

/// A root / threshold was not reached on the supplied grid.
class NotReachedError : public Error {
public:
  NotReachedError(const std::string& what, double attained_max)
      : Error(what), attained_max_(attained_max) {}
  double attained_max() const noexcept { return attained_max_; }

private:
  double attained_max_;
};

class StepSizeError : public Error {
public:
  using Error::Error;
};

class IntegratorFailure : public Error {
public:
  using Error::Error;
};

class UndefinedVisibility : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace compdeco
