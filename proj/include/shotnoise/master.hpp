#pragma once

// Grid evaluation of the jump-diffusion Master equation in integral form and
// in the differential form obtained by applying (∂ + γ)^m, plus residual and
// convergence-order tools. Everything is templated on the scalar type so the
// certificate can run in long double when double rounding would plateau.

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "shotnoise/errors.hpp"
#include "shotnoise/noise.hpp"

namespace shotnoise {

template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Uniform grid x_i = x_lo + i h, i = 0..n-1.
struct GridSpec {
  double x_lo = 0.0;
  double x_hi = 1.0;
  int n = 9;

  void validate() const;
  double h() const { return (x_hi - x_lo) / (n - 1); }
  double x(int i) const { return x_lo + i * h(); }
  /// The same grid with k nodes dropped at each end.
  GridSpec trimmed(int k) const;
};

template <class Scalar = double>
struct GridFunction {
  GridSpec spec;
  Vector<Scalar> values;

  template <class F>
  static GridFunction sample(const GridSpec& spec, F&& f) {
    spec.validate();
    GridFunction g{spec, Vector<Scalar>(spec.n)};
    const Scalar h = (Scalar(spec.x_hi) - Scalar(spec.x_lo)) / Scalar(spec.n - 1);
    for (int i = 0; i < spec.n; ++i) g.values[i] = f(Scalar(spec.x_lo) + Scalar(i) * h);
    return g;
  }

  Scalar h() const { return (Scalar(spec.x_hi) - Scalar(spec.x_lo)) / Scalar(spec.n - 1); }
  Scalar x(int i) const { return Scalar(spec.x_lo) + Scalar(i) * h(); }

  /// Throws BoundaryError on a length mismatch or non-finite value.
  void validate() const {
    spec.validate();
    if (values.size() != spec.n) throw BoundaryError("GridFunction: value count does not match grid");
    for (Eigen::Index i = 0; i < values.size(); ++i)
      if (!std::isfinite(static_cast<double>(values[i]))) throw BoundaryError("GridFunction: non-finite value");
  }
};

// Model description. The drift is the b(x) in dX = b(X) dt + σ dW + jumps.
struct ZeroDrift {};
struct ConstantDrift {
  double k = 0.0;
};
struct LinearRestoring {  // b(x) = -αx
  double alpha = 1.0;
};
struct TanhRepulsive {  // b(x) = β tanh(βx)
  double beta = 1.0;
};
using Drift = std::variant<ZeroDrift, ConstantDrift, LinearRestoring, TanhRepulsive>;

struct ZeroDiffusion {};
struct ConstantDiffusion {
  double sigma = 0.0;
};
using Diffusion = std::variant<ZeroDiffusion, ConstantDiffusion>;

struct ConstantRate {
  double lambda = 0.0;
};
struct ExpDecayCentered {  // λ(x) = e^{-β(x - reference)}
  double beta = 1.0;
  double reference = 0.0;
};
using Rate = std::variant<ConstantRate, ExpDecayCentered>;

struct ModelSpec {
  Drift drift = ZeroDrift{};
  Diffusion diffusion = ZeroDiffusion{};
  Rate rate = ConstantRate{};
  ErlangJumpLaw jumps{};

  void validate() const;
};

template <class Scalar>
Scalar drift_at(const Drift& d, Scalar x) {
  using std::tanh;
  struct V {
    Scalar x;
    Scalar operator()(const ZeroDrift&) const { return Scalar(0); }
    Scalar operator()(const ConstantDrift& c) const { return Scalar(c.k); }
    Scalar operator()(const LinearRestoring& l) const { return -Scalar(l.alpha) * x; }
    Scalar operator()(const TanhRepulsive& t) const { return Scalar(t.beta) * tanh(Scalar(t.beta) * x); }
  };
  return std::visit(V{x}, d);
}

inline double sigma_of(const Diffusion& d) {
  if (const auto* c = std::get_if<ConstantDiffusion>(&d)) return c->sigma;
  return 0.0;
}

template <class Scalar>
Scalar rate_at(const Rate& r, Scalar x) {
  using std::exp;
  if (const auto* c = std::get_if<ConstantRate>(&r)) return Scalar(c->lambda);
  const auto& e = std::get<ExpDecayCentered>(r);
  return exp(-Scalar(e.beta) * (x - Scalar(e.reference)));
}

namespace detail {

// Fourth-order central first derivative; result covers nodes 2..n-3.
template <class Scalar>
Vector<Scalar> d1(const Vector<Scalar>& g, Scalar h) {
  const Eigen::Index n = g.size();
  if (n < 5) throw BoundaryError("stencil: fewer than 5 nodes");
  const Eigen::Index k = n - 4;
  return (-g.segment(4, k) + Scalar(8) * g.segment(3, k) - Scalar(8) * g.segment(1, k) + g.segment(0, k)) /
         (Scalar(12) * h);
}

// Fourth-order central second derivative; result covers nodes 2..n-3.
template <class Scalar>
Vector<Scalar> d2(const Vector<Scalar>& g, Scalar h) {
  const Eigen::Index n = g.size();
  if (n < 5) throw BoundaryError("stencil: fewer than 5 nodes");
  const Eigen::Index k = n - 4;
  return (-g.segment(4, k) + Scalar(16) * g.segment(3, k) - Scalar(30) * g.segment(2, k) +
          Scalar(16) * g.segment(1, k) - g.segment(0, k)) /
         (Scalar(12) * h * h);
}

// Drop k entries at each end.
template <class Scalar>
Vector<Scalar> inner(const Vector<Scalar>& g, Eigen::Index k) {
  if (g.size() <= 2 * k) throw BoundaryError("stencil margin exceeds grid");
  return g.segment(k, g.size() - 2 * k);
}

// (∂ + γ)^m by m-fold composition; drops 2m nodes at each end.
template <class Scalar>
Vector<Scalar> shift_power(Vector<Scalar> g, Scalar h, Scalar gamma, int m) {
  for (int i = 0; i < m; ++i) g = d1(g, h) + gamma * inner(g, 2);
  return g;
}

template <class Scalar>
void check_decay(const Vector<Scalar>& p, double tol) {
  using std::abs;
  if (!(abs(p[0]) < Scalar(tol)) || !(abs(p[p.size() - 1]) < Scalar(tol)))
    throw BoundaryError("density has not decayed below " + std::to_string(tol) + " at the grid ends");
}

template <class Scalar>
Vector<Scalar> nodes(const GridFunction<Scalar>& g) {
  Vector<Scalar> x(g.spec.n);
  for (int i = 0; i < g.spec.n; ++i) x[i] = g.x(i);
  return x;
}

// ∂x[fP] + ½∂xx[σ²P] with f = -b, on nodes 2..n-3.
template <class Scalar>
Vector<Scalar> transport(const GridFunction<Scalar>& P, const ModelSpec& model) {
  const Vector<Scalar> x = nodes(P);
  Vector<Scalar> fP(P.spec.n);
  for (int i = 0; i < P.spec.n; ++i) fP[i] = -drift_at(model.drift, x[i]) * P.values[i];
  const Scalar h = P.h();
  Vector<Scalar> out = d1(fP, h);
  const double sigma = sigma_of(model.diffusion);
  if (sigma != 0.0) out += Scalar(0.5) * Scalar(sigma) * Scalar(sigma) * d2(P.values, h);
  return out;
}

template <class Scalar>
Vector<Scalar> rate_times(const GridFunction<Scalar>& P, const ModelSpec& model) {
  Vector<Scalar> lp(P.spec.n);
  for (int i = 0; i < P.spec.n; ++i) lp[i] = rate_at(model.rate, P.x(i)) * P.values[i];
  return lp;
}

// Neumaier-compensated sum, so norms and masses do not depend on grouping.
template <class Scalar>
Scalar compensated_sum(const Vector<Scalar>& v) {
  using std::abs;
  Scalar s(0), c(0);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const Scalar t = s + v[i];
    if (abs(s) >= abs(v[i]))
      c += (s - t) + v[i];
    else
      c += (v[i] - t) + s;
    s = t;
  }
  return s + c;
}

}  // namespace detail

struct GeneratorOptions {
  bool check_decay = true;
  double decay_tol = 1e-12;
};

/// (∂ + γ)^m g on the sub-grid trimmed by 2m nodes per side.
template <class Scalar>
GridFunction<Scalar> apply_shift_power(const GridFunction<Scalar>& g, double gamma, int m) {
  if (m < 0) throw DomainError("apply_shift_power: m must be >= 0");
  return {g.spec.trimmed(2 * m), detail::shift_power(g.values, g.h(), Scalar(gamma), m)};
}

/// Right-hand side of the integral Master equation,
/// ∂x[fP] + ½∂xx[σ²P] - λP + ∫_{-∞}^x ℰ(m,γ;x-y) λ(y) P(y) dy,
/// on nodes 2..n-3. The convolution is a trapezoid over the grid with the
/// kernel evaluated exactly; mass left of x_lo is taken as zero.
template <class Scalar>
GridFunction<Scalar> integral_generator(const GridFunction<Scalar>& P, const ModelSpec& model,
                                        const GeneratorOptions& opt = {}) {
  using std::exp;
  using std::log;
  model.validate();
  P.validate();
  if (opt.check_decay) detail::check_decay(P.values, opt.decay_tol);
  const int n = P.spec.n;
  const Scalar h = P.h();
  const Vector<Scalar> lp = detail::rate_times(P, model);

  const int m = model.jumps.m;
  const Scalar gamma(model.jumps.gamma);
  Scalar log_norm = Scalar(m) * log(gamma);
  for (int k = 2; k < m; ++k) log_norm -= log(Scalar(k));
  Vector<Scalar> kernel(n);
  kernel[0] = m == 1 ? gamma : Scalar(0);
  for (int d = 1; d < n; ++d) {
    const Scalar s = Scalar(d) * h;
    kernel[d] = exp(log_norm + Scalar(m - 1) * log(s) - gamma * s);
  }

  Vector<Scalar> conv(n - 4);
  for (int i = 2; i < n - 2; ++i) {
    Scalar acc = Scalar(0.5) * (kernel[i] * lp[0] + kernel[0] * lp[i]);
    for (int j = 1; j < i; ++j) acc += kernel[i - j] * lp[j];
    conv[i - 2] = h * acc;
  }
  Vector<Scalar> out = detail::transport(P, model) - detail::inner(lp, 2) + conv;
  return {P.spec.trimmed(2), std::move(out)};
}

/// Differential form: (∂+γ)^m applied to ∂tP, i.e.
/// (∂+γ)^m (∂x[fP] + ½∂xx[σ²P]) + [γ^m - (∂+γ)^m](λP),
/// on nodes 2+2m..n-3-2m. For m = 1 and zero drift this is -∂x(λP).
template <class Scalar>
GridFunction<Scalar> differential_generator(const GridFunction<Scalar>& P, const ModelSpec& model,
                                            const GeneratorOptions& opt = {}) {
  using std::pow;
  model.validate();
  P.validate();
  if (opt.check_decay) detail::check_decay(P.values, opt.decay_tol);
  const int m = model.jumps.m;
  const Scalar h = P.h();
  const Scalar gamma(model.jumps.gamma);
  const Vector<Scalar> lp = detail::rate_times(P, model);
  // Transport and λP both live on nodes 2..n-3 before the shift operator.
  Vector<Scalar> inside = detail::transport(P, model) - detail::inner(lp, 2);
  Vector<Scalar> out = detail::shift_power(inside, h, gamma, m) + pow(gamma, m) * detail::inner(lp, 2 + 2 * m);
  return {P.spec.trimmed(2 + 2 * m), std::move(out)};
}

/// Restrict g to the nodes of a sub-grid (same spacing, nested).
template <class Scalar>
GridFunction<Scalar> restrict_to(const GridFunction<Scalar>& g, const GridSpec& target) {
  const double offset = (target.x_lo - g.spec.x_lo) / g.spec.h();
  const int k = static_cast<int>(std::lround(offset));
  if (std::abs(offset - k) > 1e-6 || k < 0 || k + target.n > g.spec.n)
    throw BoundaryError("restrict_to: target is not a nested sub-grid");
  return {target, g.values.segment(k, target.n)};
}

struct ResidualOptions {
  bool check_decay = true;
  double decay_tol = 1e-12;
  /// Only nodes inside [window_lo, window_hi] enter the norm.
  double window_lo = -std::numeric_limits<double>::infinity();
  double window_hi = std::numeric_limits<double>::infinity();
};

/// Max-norm of the stationary differential equation's imbalance.
template <class Scalar>
double stationary_residual(const GridFunction<Scalar>& P, const ModelSpec& model, const ResidualOptions& opt = {}) {
  const auto r = differential_generator(P, model, GeneratorOptions{opt.check_decay, opt.decay_tol});
  double worst = 0.0;
  bool any = false;
  for (int i = 0; i < r.spec.n; ++i) {
    const double x = r.spec.x(i);
    if (x < opt.window_lo || x > opt.window_hi) continue;
    // Stencils reaching outside the window would see data the window excludes.
    const int margin = 2 + 2 * model.jumps.m;
    const double h = r.spec.h();
    if (x - margin * h < opt.window_lo || x + margin * h > opt.window_hi) continue;
    worst = std::max(worst, std::abs(static_cast<double>(r.values[i])));
    any = true;
  }
  if (!any) throw BoundaryError("stationary_residual: window contains no interior node");
  return worst;
}

/// Co-moving wave equation residual with λ(ξ) = e^{-βξ}:
/// m = 1: -C(γ+∂)∂P + ∂(λP); m = 2 (integrated once): -C(γ+∂)²P + (2γ+∂)(λP).
template <class Scalar>
double wave_residual(const GridFunction<Scalar>& P, double beta, double gamma, int m, double speed,
                     const GeneratorOptions& opt = {}) {
  using std::exp;
  if (m != 1 && m != 2) throw DomainError("wave_residual: m must be 1 or 2");
  P.validate();
  if (opt.check_decay) detail::check_decay(P.values, opt.decay_tol);
  const Scalar h = P.h();
  const Scalar C(speed), g(gamma);
  Vector<Scalar> lp(P.spec.n);
  for (int i = 0; i < P.spec.n; ++i) lp[i] = exp(-Scalar(beta) * P.x(i)) * P.values[i];
  const Vector<Scalar> p1 = detail::d1(P.values, h);
  const Vector<Scalar> p2 = detail::d2(P.values, h);
  const Vector<Scalar> p0 = detail::inner(P.values, 2);
  Vector<Scalar> r;
  if (m == 1)
    r = -C * (g * p1 + p2) + detail::d1(lp, h);
  else
    r = -C * (g * g * p0 + Scalar(2) * g * p1 + p2) + Scalar(2) * g * detail::inner(lp, 2) + detail::d1(lp, h);
  return static_cast<double>(r.cwiseAbs().maxCoeff());
}

/// Schrödinger form for Ψ with λ = e^{-βξ}:
/// Ψ'' + [(β - 2γ)λ/(2C) - λ²/(4C²)]Ψ, max-norm relative to max|Ψ|.
template <class Scalar>
double schrodinger_residual(const GridFunction<Scalar>& psi, double beta, double gamma, double speed) {
  using std::exp;
  psi.validate();
  const Scalar h = psi.h();
  const Scalar C(speed);
  const Vector<Scalar> p2 = detail::d2(psi.values, h);
  Scalar worst(0);
  for (Eigen::Index i = 0; i < p2.size(); ++i) {
    const Scalar lam = exp(-Scalar(beta) * psi.x(static_cast<int>(i) + 2));
    const Scalar pot = (Scalar(beta) - Scalar(2) * Scalar(gamma)) * lam / (Scalar(2) * C) - lam * lam / (Scalar(4) * C * C);
    worst = std::max<Scalar>(worst, std::abs(p2[i] + pot * psi.values[i + 2]));
  }
  return static_cast<double>(worst / psi.values.cwiseAbs().maxCoeff());
}

/// Grid sum × h with compensated summation.
template <class Scalar>
double grid_mass(const GridFunction<Scalar>& g) {
  return static_cast<double>(detail::compensated_sum(g.values) * g.h());
}

struct OrderFit {
  double order = 0.0;
  double log_constant = 0.0;
};

/// Least-squares slope of log(err) against log(h) over the three finest
/// levels (smallest h). Needs at least three levels.
OrderFit fit_order(const std::vector<double>& h, const std::vector<double>& err);

/// Convergence threshold for fitted orders (nominal 2).
inline constexpr double kOrderThreshold = 1.7;

struct CertificateConfig {
  std::vector<int> levels{513, 1025, 2049, 4097, 8193};
  // Wide enough on the right that Erlang jumps do not carry mass off the grid.
  double x_lo = -24.0;
  double x_hi = 40.0;
  int components = 3;  // Gaussians per random test density
  int densities = 2;   // random densities per m
  double alpha = 0.6;  // linear restoring drift
  double sigma = 0.8;
  double lambda = 1.3;
  double gamma = 1.5;
  std::uint64_t seed = 20240611;

  void validate() const;
};

struct CertificateLevel {
  int n = 0;
  double h = 0.0;
  double max_diff = 0.0;     // worst over the random densities
  double mass_defect = 0.0;  // |Σ integral_generator · h|
};

struct CertificateResult {
  int m = 0;
  std::vector<CertificateLevel> levels;
  double order = 0.0;
  double mass_order = 0.0;
  bool passed = false;
};

/// Compares (∂+γ)^m applied to the integral generator with the differential
/// generator on random Gaussian mixtures, in long double, across the
/// configured refinement levels.
CertificateResult generator_certificate(int m, const CertificateConfig& cfg);

}  // namespace shotnoise
