#pragma once

// Reference implementations used only by the tests. Nothing here calls into
// the library's special functions.

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/hypergeometric_1F1.hpp>
#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

using ld = long double;

inline ld lgamma(ld x) { return boost::math::lgamma(x); }
inline ld digamma(ld x) { return boost::math::digamma(x); }
inline ld bessel_i(ld nu, ld x) { return boost::math::cyl_bessel_i(nu, x); }
inline ld bessel_k(ld nu, ld x) { return boost::math::cyl_bessel_k(nu, x); }
inline ld erlang_survival(int m, ld gamma, ld x) { return boost::math::gamma_q(static_cast<ld>(m), gamma * x); }
inline ld hyp1f1(ld a, ld b, ld z) { return boost::math::hypergeometric_1F1(a, b, z); }

// Adaptive Simpson on a finite interval.
inline ld simpson(const std::function<ld(ld)>& f, ld a, ld b, ld tol, int depth = 50) {
  struct Rec {
    const std::function<ld(ld)>& f;
    ld run(ld a, ld b, ld fa, ld fm, ld fb, ld whole, ld tol, int depth) const {
      const ld m = 0.5L * (a + b);
      const ld lm = 0.5L * (a + m), rm = 0.5L * (m + b);
      const ld flm = f(lm), frm = f(rm);
      const ld left = (m - a) / 6 * (fa + 4 * flm + fm);
      const ld right = (b - m) / 6 * (fm + 4 * frm + fb);
      const ld delta = left + right - whole;
      if (depth <= 0 || std::fabs(delta) <= 15 * tol) return left + right + delta / 15;
      return run(a, m, fa, flm, fm, left, tol / 2, depth - 1) + run(m, b, fm, frm, fb, right, tol / 2, depth - 1);
    }
  } rec{f};
  const ld fa = f(a), fb = f(b), fm = f(0.5L * (a + b));
  return rec.run(a, b, fa, fm, fb, (b - a) / 6 * (fa + 4 * fm + fb), tol, depth);
}

// U(a,b,z) from its Laplace-type integral, long double exp-sinh quadrature.
inline ld kummer_u(ld a, ld b, ld z) {
  boost::math::quadrature::exp_sinh<ld> integrator;
  auto g = [&](ld t) -> ld {
    if (t <= 0) return 0;
    return std::exp(-z * t + (a - 1) * std::log(t) + (b - a - 1) * std::log1p(t) - boost::math::lgamma(a));
  };
  return integrator.integrate(g);
}

// ∫₀^∞ e^{-x cosh t} dt = K₀(x).
inline ld bessel_k0_integral(ld x) {
  boost::math::quadrature::exp_sinh<ld> integrator;
  return integrator.integrate([&](ld t) { return std::exp(-x * std::cosh(t)); });
}

// Central difference of a function, Richardson-extrapolated over h, h/2, h/4.
inline ld richardson_derivative(const std::function<ld(ld)>& f, ld x, ld h) {
  auto d = [&](ld s) { return (f(x + s) - f(x - s)) / (2 * s); };
  const ld d1 = d(h), d2 = d(h / 2), d4 = d(h / 4);
  const ld r1 = (4 * d2 - d1) / 3, r2 = (4 * d4 - d2) / 3;
  return (16 * r2 - r1) / 15;
}

// Empirical CDF distance for test-side KS checks.
inline double ks(std::vector<double> s, const std::function<double(double)>& cdf) {
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double d = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double c = cdf(s[i]);
    d = std::max({d, std::fabs((i + 1) / n - c), std::fabs(c - i / n)});
  }
  return d;
}

}  // namespace oracle
