#pragma once

#include <functional>

namespace shotnoise {

struct QuadOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  unsigned max_depth = 25;  // bisection depth limit for any one panel
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;  // ∫|f|, used for the relative criterion
};

/// Globally adaptive Gauss–Kronrod (7/15) quadrature on [a, b]; either end
/// may be infinite. The panel with the largest error is bisected until the
/// summed estimate is within max(abs_tol, rel_tol * l1). Throws
/// ConvergenceError when that fails or the value is not finite.
QuadResult integrate(const std::function<double(double)>& f, double a, double b, const QuadOptions& opt = {});

/// Convenience: value only.
double quad(const std::function<double(double)>& f, double a, double b, const QuadOptions& opt = {});

/// Tanh-sinh quadrature on a finite [a, b]; tolerates integrable endpoint
/// singularities. f is never evaluated at a or b.
double quad_singular_ends(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-10);

}  // namespace shotnoise
