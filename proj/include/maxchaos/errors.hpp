#pragma once

#include <stdexcept>
#include <string>

namespace maxchaos {

/// Base of every error raised by the library. The CLI maps the subclass to
/// an exit code (config errors to 2, numeric failures to 3).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid model or simulation parameters.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Rank-based drift that does not admit a stationary distribution function.
class ModelInvalidError : public Error {
 public:
  using Error::Error;
};

/// Non-finite state produced while time stepping.
class NumericOverflowError : public Error {
 public:
  using Error::Error;
};

/// Query outside the resolved range of a gridded distribution function.
class GridExtensionError : public Error {
 public:
  using Error::Error;
};

/// Stationary ODE integration ran out of grid before both tails resolved.
class TailResolutionError : public Error {
 public:
  using Error::Error;
};

/// Von Mises ratio requested where 1 - F is numerically zero.
class TailDegeneracyError : public Error {
 public:
  using Error::Error;
};

/// Population too small for the Gaussian normalizing constants.
class TooSmallNError : public Error {
 public:
  using Error::Error;
};

/// Exhaustive enumeration or Monte Carlo configuration exceeds its cost guard.
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// Malformed experiment configuration; the message carries the key path.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// CSV input that does not match the declared schema.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace maxchaos
