#pragma once

#include <stdexcept>

namespace fdivlib {

/// Thrown when a requested optimization cannot be reduced to a
/// finite-dimensional search by the reduction theorems (e.g. minimizing an
/// unbounded divergence subject to an unbounded constraint).  Callers are
/// expected to surface this as a distinct status rather than a generic error.
class unsupported_case : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when a generator carries no curvature description (no second
/// derivative and no atoms), so the testing representation cannot be formed.
class unsupported_generator : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace fdivlib
