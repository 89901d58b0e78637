#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mildns {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
  using Error::Error;
};

class RankError : public Error {
public:
  using Error::Error;
};

// Invalid Lorentz index combination.
class IndexError : public Error {
public:
  using Error::Error;
};

class RangeError : public Error {
public:
  using Error::Error;
};

class UnsupportedSpec : public Error {
public:
  using Error::Error;
};

class NumericError : public Error {
public:
  using Error::Error;
};

// r <= n: the integral estimates degenerate.
class SubcriticalityError : public DomainError {
public:
  using DomainError::DomainError;
};

class NoContractionError : public DomainError {
public:
  using DomainError::DomainError;
};

class DivergentIntegralError : public DomainError {
public:
  using DomainError::DomainError;
};

class InputError : public Error {
public:
  using Error::Error;
};

class InsufficientDataError : public Error {
public:
  using Error::Error;
};

class ValidationError : public Error {
public:
  using Error::Error;
};

class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& what, std::vector<double> values)
      : Error(what), values_(std::move(values)) {}
  const std::vector<double>& values() const noexcept { return values_; }

private:
  std::vector<double> values_;
};

class CannotExtendError : public Error {
public:
  CannotExtendError(const std::string& what, double threshold)
      : Error(what), threshold_(threshold) {}
  double threshold() const noexcept { return threshold_; }

private:
  double threshold_;
};

}  // namespace mildns
