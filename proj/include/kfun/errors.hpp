#pragma once

#include <stdexcept>
#include <string>

namespace kfun {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of the function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The magnitude of a result is not representable; carries its natural log.
class OverflowError : public Error {
 public:
  OverflowError(const std::string& what, double log_value)
      : Error(what), log_value_(log_value) {}
  double log_value() const noexcept { return log_value_; }

 private:
  double log_value_;
};

/// A gamma factor was evaluated at a pole.
class PoleError : public DomainError {
 public:
  PoleError(const std::string& what, int factor) : DomainError(what), factor_(factor) {}
  /// Index of the offending factor (formula-specific numbering, 0-based).
  int factor() const noexcept { return factor_; }

 private:
  int factor_;
};

/// The series argument exceeds the range where fixed precision is reliable.
class ArgumentRangeError : public Error {
 public:
  ArgumentRangeError(const std::string& what, double argument)
      : Error(what), argument_(argument) {}
  double argument() const noexcept { return argument_; }

 private:
  double argument_;
};

/// A series failed to reach its tolerance within the term budget.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double partial_sum)
      : Error(what), partial_sum_(partial_sum) {}
  double partial_sum() const noexcept { return partial_sum_; }

 private:
  double partial_sum_;
};

/// Endpoint exponents at or below -1.
class NonIntegrableError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// An improper integral does not converge.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace kfun
