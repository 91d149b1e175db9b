#pragma once

// Special functions used by the closed-form densities, wave speeds and
// normalizations. All functions are pure and reentrant.

namespace shotnoise {

struct Accuracy {
  double abs_tol = 1e-10;
  int max_terms = 500;

  /// Throws DomainError unless abs_tol > 0 and max_terms >= 1.
  void validate() const;
};

/// ln Γ(x) for x > 0.
double log_gamma(double x);

/// ψ(x) = d/dx ln Γ(x) for x > 0.
double digamma(double x);

/// Modified Bessel function of the first kind I_ν(x), ν >= 0, x >= 0.
double bessel_i(double nu, double x, const Accuracy& acc = {});

/// Modified Bessel function of the second kind K_ν(x), any real ν, x > 0.
double bessel_k(double nu, double x, const Accuracy& acc = {});

/// Survival function of the Erlang(m, γ) law: ∫_x^∞ γ^m ξ^{m-1} e^{-γξ}/Γ(m) dξ.
double erlang_survival(int m, double gamma, double x);

/// Tricomi confluent hypergeometric function U(a, b, z), a > 0, z > 0.
double kummer_u(double a, double b, double z);

/// Whittaker W_{κ,0}(z) = e^{-z/2} √z U(1/2 - κ, 1, z); needs 1/2 - κ > 0, z > 0.
double whittaker_w0(double kappa, double z);

/// Kummer confluent hypergeometric ₁F₁(a; b; z), b > 0.
///
/// Nonpositive integer a gives the terminating polynomial. Negative z goes
/// through Kummer's transformation for moderate |z| and through the
/// algebraic large-|z| expansion beyond that; large positive z uses the
/// exponential expansion. Throws ConvergenceError when no branch converges
/// within acc.max_terms.
double kummer_1f1(double a, double b, double z, const Accuracy& acc = {});

namespace detail {
// Power series for I_ν with ν > -1, the range the m = 2 stationary density
// needs when λ < α.
double bessel_i_series(double nu, double x, int max_terms);
}  // namespace detail

}  // namespace shotnoise
