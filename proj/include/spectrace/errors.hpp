#pragma once

#include <stdexcept>
#include <string>

namespace spectrace {

/// Raised when an iterative or truncated computation cannot reach the
/// requested accuracy (iteration cap, quadrature panel budget, term cap).
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

// Smallest tolerance any public routine accepts.
inline constexpr double kMinTolerance = 1e-13;

// Throws std::invalid_argument unless tol is finite and >= kMinTolerance.
void require_tolerance(double tol, const char* where);

}  // namespace spectrace
