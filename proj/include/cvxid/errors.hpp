#pragma once

#include <stdexcept>

namespace cvxid {

// Invalid loss/schedule/kernel parameters or a malformed configuration.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dimension mismatches and out-of-range call arguments.
struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Rejected observations (non-finite values) and malformed data files.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Singular or ill-conditioned linear systems.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// File read/write failures.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cvxid
