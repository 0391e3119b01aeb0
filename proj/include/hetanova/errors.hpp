#pragma once

#include <stdexcept>
#include <string>

namespace hetanova {

// Base class for everything this library throws on purpose. Two families:
// InputError (bad data or settings, CLI exit code 2) and NumericalError
// (a computation could not be completed, CLI exit code 3).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

// A cell has fewer than two observations.
class EmptyCellError : public InputError {
 public:
  using InputError::InputError;
};

// Grid shapes or factor levels do not line up.
class DimensionMismatchError : public InputError {
 public:
  using InputError::InputError;
};

// A cell has zero sample variance; every statistic divides by one.
class DegenerateCellError : public InputError {
 public:
  using InputError::InputError;
};

// Bad error-family parameters in a simulation config.
class InvalidFamilyParamsError : public InputError {
 public:
  using InputError::InputError;
};

// Requested test combination is not defined (e.g. asymptotic MCT for
// interaction effects).
class UnsupportedCombinationError : public InputError {
 public:
  using InputError::InputError;
};

class InvalidSettingsError : public InputError {
 public:
  using InputError::InputError;
};

// Malformed CSV/JSON input.
class ParseError : public InputError {
 public:
  using InputError::InputError;
};

// The weighted linear system lost positivity (cannot happen for positive
// variances, guarded anyway).
class SingularSystemError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// A bootstrap replicate exhausted its refit retries.
class ExcessiveNonConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class InvalidDFError : public InputError {
 public:
  using InputError::InputError;
};

// Covariance matrix failed its square-root factorization beyond the
// jitter tolerance.
class NotPSDError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace hetanova
