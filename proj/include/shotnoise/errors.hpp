#pragma once

#include <stdexcept>
#include <string>

namespace shotnoise {

/// Argument outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// A series or quadrature failed to reach its tolerance (overflow, divergence).
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A stationary density could not be normalized (infinite or unresolved mass).
struct NormalizationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Grid-level failures: density not decayed at the ends, stencil margin too small.
struct BoundaryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Too few samples or recorded points for an estimator.
struct InsufficientDataError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Thinning majorant could not be certified even after repeated dt halving.
struct ThinningError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace shotnoise
