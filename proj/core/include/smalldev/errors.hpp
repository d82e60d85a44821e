#pragma once

#include <stdexcept>
#include <string>

namespace smalldev {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operation not defined for the given model (e.g. a density of an atomic measure).
class UnsupportedOperation : public Error {
 public:
  using Error::Error;
};

/// A numerical routine could not reach its tolerance.
class NumericFailure : public Error {
 public:
  NumericFailure(const std::string& what, double achieved)
      : Error(what + " (achieved tolerance " + std::to_string(achieved) + ")"),
        achieved_(achieved) {}

  double achieved_tolerance() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// Argument outside the mathematical domain (divergent moment, etc.).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Violated input precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Request exceeds a hard capacity limit; carries the smallest supported parameter.
class CapacityError : public Error {
 public:
  CapacityError(const std::string& what, double min_supported)
      : Error(what), min_supported_(min_supported) {}

  double min_supported() const noexcept { return min_supported_; }

 private:
  double min_supported_;
};

class CertificateFailed : public Error {
 public:
  using Error::Error;
};

class PropertyViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace smalldev
