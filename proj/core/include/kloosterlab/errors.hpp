#pragma once

#include <stdexcept>

namespace kloosterlab {

// Raised when a request would blow the documented cost envelope
// (e.g. a naive O(p^2) table for large p). CLI maps this to exit 3.
struct CostGuardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid experiment configuration. CLI maps this to exit 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace kloosterlab
