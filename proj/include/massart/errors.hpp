#pragma once

#include <stdexcept>
#include <string>

namespace massart {

/// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A chi-squared style quantity is infinite (mass outside the base support).
class DivergenceInfinite : public Error {
 public:
  using Error::Error;
};

/// Exponential enumeration or allocation past a configured cap.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Caller violated a documented precondition.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Construction parameters violate a required inequality. `check()` names it.
class InfeasibleParams : public Error {
 public:
  InfeasibleParams(std::string check, const std::string& what)
      : Error(what), check_(std::move(check)) {}
  const std::string& check() const noexcept { return check_; }

 private:
  std::string check_;
};

/// A hypothesis of an existence statement fails (e.g. M' <= 2m/c).
class HypothesisViolation : public Error {
 public:
  using Error::Error;
};

/// Rational approximation could not reach the needed margin.
class NumericMarginError : public Error {
 public:
  using Error::Error;
};

/// Malformed serialized data.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace massart
