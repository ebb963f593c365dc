#pragma once

#include <stdexcept>
#include <string>

namespace amod {

/// An input violates a numerical precondition (spectral tail, support, aliasing,
/// partition denominator). The message names the offending item.
class GuardViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computation would exceed its cost budget (dense quadrature size, sweep size).
class ResourceGuard : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace amod
