#pragma once

#include <stdexcept>
#include <string>

namespace gapsieve {

/// Caller passed something outside an operation's domain (non-prime modulus
/// factor, odd gap, window longer than the cycle, ...).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A value no longer fits the fixed-width type that carries it.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// Memory budget or other resource limit would be exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Arithmetic outside the domain of a formula, e.g. p - 2 == 0.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed or corrupted cycle file.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gapsieve
