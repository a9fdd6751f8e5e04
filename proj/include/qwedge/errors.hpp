#pragma once

#include <stdexcept>
#include <string>

namespace qwedge {

/// Division by zero or a non-invertible element in an exact ring.
class ArithmeticError : public std::domain_error {
 public:
  explicit ArithmeticError(const std::string& what) : std::domain_error(what) {}
};

/// A specialization point where some denominator vanishes. Callers resample.
class BadPointError : public std::runtime_error {
 public:
  explicit BadPointError(const std::string& what) : std::runtime_error(what) {}
};

/// Leg layout or shape mismatch between operands.
class ShapeError : public std::invalid_argument {
 public:
  explicit ShapeError(const std::string& what) : std::invalid_argument(what) {}
};

/// Unsupported (series, N) combination or invalid configuration.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// An internal consistency check failed (convention bug, failed self-test).
class VerificationError : public std::logic_error {
 public:
  explicit VerificationError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace qwedge
