#pragma once

#include <stdexcept>
#include <string>

namespace tdoa {

struct InvalidArgumentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Zero-energy input to the correlator: the NCC denominator vanishes.
struct DegenerateSignalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Channel gain with zero magnitude: equalization would divide by zero.
struct DegenerateChannelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Evaluation point inside the guard radius of a receiver: unit vector undefined.
struct SingularityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CovarianceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed document (syntax or schema shape).
struct ConfigParseError : ConfigError {
  using ConfigError::ConfigError;
};

// Well-formed document violating a value invariant.
struct ConfigValidationError : ConfigError {
  using ConfigError::ConfigError;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace tdoa
