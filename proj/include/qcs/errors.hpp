#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qcs {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter lies outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A time argument lies outside the interval a quantity is defined on.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// A coefficient or intermediate value evaluated to a non-finite number.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// The adaptive integrator could not advance.
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double last_good_tau)
      : Error(what), last_good_tau_(last_good_tau) {}
  double last_good_tau() const noexcept { return last_good_tau_; }

 private:
  double last_good_tau_;
};

/// A conserved quantity drifted beyond what the requested tolerance allows.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// A quadrature grid does not cover the wavepackets it is asked to integrate.
class GridError : public Error {
 public:
  using Error::Error;
};

/// Finite-difference refinement did not behave like a converging estimate.
class DiagnosticError : public Error {
 public:
  using Error::Error;
};

/// Monte-Carlo statistical error exceeds the requested tolerance.
class UndersamplingError : public Error {
 public:
  UndersamplingError(const std::string& what, std::size_t suggested_samples)
      : Error(what), suggested_samples_(suggested_samples) {}
  std::size_t suggested_samples() const noexcept { return suggested_samples_; }

 private:
  std::size_t suggested_samples_;
};

}  // namespace qcs
