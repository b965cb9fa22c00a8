#pragma once

#include <stdexcept>
#include <string>

namespace hdc {

// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Bad input: out-of-range parameters, malformed files, unknown identifiers.
class ValidationError : public Error {
public:
  using Error::Error;
};

// A parameter lies outside the domain of a formula (e.g. y >= 1).
class DomainError : public ValidationError {
public:
  using ValidationError::ValidationError;
};

// Covariance input that is not symmetric positive definite.
class StructureError : public ValidationError {
public:
  using ValidationError::ValidationError;
};

// A requested computation is not supported for the given structure.
class UnsupportedError : public ValidationError {
public:
  using ValidationError::ValidationError;
};

// A formula's standing assumption is violated (e.g. non-diagonal covariance).
class AssumptionError : public ValidationError {
public:
  using ValidationError::ValidationError;
};

// File system failures; the message carries the OS error text.
class IoError : public Error {
public:
  using Error::Error;
};

// Numerical failures: these map to exit code 2 in the CLI.
class NumericalError : public Error {
public:
  using Error::Error;
};

// Matrix is rank deficient by construction (e.g. p >= n1 + n2 - 2).
class SingularityError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

// Matrix is numerically too close to singular to trust the solve.
class ConditioningError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

}  // namespace hdc
