#pragma once

#include <stdexcept>
#include <string>

namespace qpinem {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad parameters or configuration. CLI exit code 1.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Numerical failure (truncation, convergence, undefined ratios). CLI exit code 2.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// File missing, unreadable or malformed. CLI exit code 3.
class IoError : public Error {
 public:
  using Error::Error;
};

class TruncationError : public NumericalError {
 public:
  TruncationError(const std::string& what, int required_n_max)
      : NumericalError(what), required_n_max_(required_n_max) {}
  int required_n_max() const noexcept { return required_n_max_; }

 private:
  int required_n_max_;
};

class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Quantity undefined for the given input, e.g. g2 of the vacuum.
class UndefinedError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace qpinem
