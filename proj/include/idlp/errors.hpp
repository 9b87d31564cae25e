#pragma once

#include <stdexcept>
#include <string>

namespace idlp {

// Base for all library failures. The CLI maps each subclass to an exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid hyperparameters, flags or configuration files.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed, missing or inconsistent input data.
class DataError : public Error {
 public:
  using Error::Error;
};

// Divergence or non-finite values during optimization.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace idlp
