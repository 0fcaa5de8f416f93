#pragma once

#include <stdexcept>
#include <string>

namespace sglbo {

/// Violated precondition or invalid argument value (bad dimension, range, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Problem size exceeds a hard guard on memory / exponential scaling.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical procedure failed (factorization breakdown, no convergence).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input; the message names the offending line.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A two-qubit gate touches qubits the device's noise table does not couple.
class TopologyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inconsistent or unusable experiment / CLI configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sglbo
