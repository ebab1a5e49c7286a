#pragma once

#include <stdexcept>
#include <string>

namespace htdc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters, empty inputs, or inconsistent configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Shape mismatch between matrices, layers, or feature sets.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values encountered during a numeric computation.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Malformed or incomplete input data.
class IngestionError : public Error {
 public:
  using Error::Error;
};

}  // namespace htdc
