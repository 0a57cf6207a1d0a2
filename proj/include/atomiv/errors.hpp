#pragma once

#include <stdexcept>
#include <string>

namespace atomiv {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Numerical machinery (quadrature, root finding) did not meet its tolerance.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A quoted price admits no implied volatility (at or beyond an arbitrage bound).
class NoSolution : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class QuadratureError : public NumericalError {
 public:
  QuadratureError(const std::string& what, double estimate, double error_estimate, int evaluations)
      : NumericalError(what), estimate_(estimate), error_estimate_(error_estimate),
        evaluations_(evaluations) {}

  double estimate() const noexcept { return estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }
  int evaluations() const noexcept { return evaluations_; }

 private:
  double estimate_;
  double error_estimate_;
  int evaluations_;
};

/// The target lies below U_K on its increasing branch: the strike is too
/// shallow for this probability. `minimal_log_k` is the smallest log K at which
/// the inversion becomes defined (NaN when no such depth exists).
class DomainBelow : public DomainError {
 public:
  DomainBelow(const std::string& what, double minimal_log_k)
      : DomainError(what), minimal_log_k_(minimal_log_k) {}
  double minimal_log_k() const noexcept { return minimal_log_k_; }

 private:
  double minimal_log_k_;
};

class DomainAbove : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Invalid configuration supplied to the command-line front end.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace atomiv
