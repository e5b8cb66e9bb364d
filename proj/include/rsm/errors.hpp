#pragma once

#include <stdexcept>

namespace rsm {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user input: malformed files, bad options, domain violations in data.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure: rank deficiency, non-finite intermediates, singular systems.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Model evaluation hit a pole of the response function.
class SingularityError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// An iterative procedure failed to converge where convergence is required.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace rsm
