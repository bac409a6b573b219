#pragma once

#include <stdexcept>
#include <string>

namespace igenkrylov {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand lengths do not match the operator or matrix they are used with.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Input data is unusable (non-finite entries, wrong shape of a literal, ...).
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

/// A model parameter is outside its admissible range.
class InvalidParameterError : public Error {
 public:
  using Error::Error;
};

/// A dense fallback was requested above the configured size limit.
class CapacityError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Loss of positive definiteness, non-finite intermediates and similar.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The input makes the requested quantity undefined (zero right-hand side, ...).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// A configuration is missing a field or holds an inconsistent combination.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace igenkrylov
