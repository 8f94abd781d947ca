#pragma once

#include <stdexcept>
#include <string>

namespace schatten {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or non-finite input data (bad file, NaN entry, wrong shape).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Index outside the valid range of a matrix or sketch.
class IndexError : public InputError {
 public:
  using InputError::InputError;
};

/// An input the operation cannot meaningfully handle, such as an all-zero spectrum.
class DegenerateInputError : public InputError {
 public:
  using InputError::InputError;
};

/// Argument outside the mathematical domain of an operation (p < 1, t > n).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Parameter combination that cannot be executed (sketch would not compress, D out of range).
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// An internal guarantee failed to hold; signals misconfiguration or a bug.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace schatten
