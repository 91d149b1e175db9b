#pragma once

// Analytical densities, transforms, wave speeds and normalizations, each
// evaluatable pointwise and checkable by quadrature.

#include <functional>
#include <limits>
#include <vector>

#include "shotnoise/master.hpp"

namespace shotnoise {

using RealFn = std::function<double(double)>;

struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
};

/// Piecewise-linear CDF on a node table, with an optional point mass.
/// Below the first node the value is the stored left-tail mass; above the
/// last it is the stored total.
struct TabulatedCdf {
  std::vector<double> x;
  std::vector<double> F;
  double atom_at = std::numeric_limits<double>::quiet_NaN();
  double atom_weight = 0.0;

  double operator()(double v) const;
  /// Left limit F(v-), differs from F(v) only at the atom.
  double left(double v) const;
  /// Continuous mass plus the atom.
  double total() const { return (F.empty() ? 0.0 : F.back()) + atom_weight; }
};

/// Integrates `density` cell by cell (Gauss–Kronrod) over `cells` uniform
/// cells of [lo, hi], adding the tails beyond lo and hi and any breakpoints
/// (where the density may be singular) as extra nodes.
TabulatedCdf tabulate_cdf(const RealFn& density, double lo, double hi, int cells,
                          const std::vector<double>& breakpoints = {},
                          double atom_at = std::numeric_limits<double>::quiet_NaN(), double atom_weight = 0.0);

// ---------------------------------------------------------------- stationary

/// m = 1 stationary density (𝒩/f) exp(-γx + ∫^x λ/f) on the grid, normalized
/// over `support` (nodes outside it get 0). Requires f > 0 on the support.
/// Throws NormalizationError when the mass is infinite or unresolved.
GridFunction<double> stationary_m1(const RealFn& f, const RealFn& lambda_fn, double gamma, const GridSpec& grid,
                                   const Interval& support = {});

/// m = 2 linear-drift stationary density
/// γ e^{-ρ-γx} (γx/ρ)^{(ρ-1)/2} I_{ρ-1}(2√(ργx)), ρ = λ/α, x >= 0.
double stationary_ou_m2(double alpha, double lambda, double gamma, double x);

/// κ^{(j)} = ∫_0^∞ x^j λ Γ(m,γ;x)/f(x) dx. Throws ConvergenceError when the
/// integral does not converge.
double cumulant(int j, int m, double gamma, double lambda, const RealFn& f);

// ---------------------------------------------------------------- transient

struct LinearShotNoise {
  int m = 1;
  double alpha = 1.0;
  double lambda = 1.0;
  double gamma = 1.0;
  double x0 = 0.0;

  void validate() const;
};

/// E[e^{-u X_t}] = exp(-u x₀ e^{-αt} - λ ∫_0^t (1 - [γ/(γ + u e^{-α(t-s)})]^m) ds).
double laplace_transform_linear(double u, double t, const LinearShotNoise& p);

struct TransientPoint {
  double atom_location = 0.0;
  double atom_weight = 0.0;
  double density = 0.0;  // continuous part at x
};

/// m = 1 transient law: atom e^{-λt} at x₀e^{-αt} plus, for z = x - x₀e^{-αt} > 0,
/// e^{-λt} ρ c e^{-γz} ₁F₁(1-ρ; 2; -c z) with c = γ(e^{αt} - 1).
TransientPoint transient_m1_linear(double x, double t, const LinearShotNoise& p);

/// CDF of the m = 1 transient law including the atom.
TabulatedCdf transient_m1_cdf(double t, const LinearShotNoise& p, int cells = 4000);

// ---------------------------------------------------------------- waves

struct WaveSolution {
  int m = 1;
  double beta = 1.0;
  double gamma = 1.0;
  double speed = 0.0;  // C_m
  double norm = 0.0;   // 𝒩

  double profile(double xi) const;
  /// Auxiliary Ψ = P₂ exp(γξ + e^{-βξ}/(2βC₂)) = 𝒩 e^{βξ/2} W_{κ,0}(Z); m = 2 only.
  double psi(double xi) const;
};

WaveSolution gumbel_wave(double beta, double gamma);
WaveSolution whittaker_wave(double beta, double gamma);

struct ProfileMoments {
  double mass = 0.0;
  double mean = 0.0;
  double variance = 0.0;
};

/// Mass, mean and variance of the profile by quadrature over ℝ.
ProfileMoments profile_moments(const WaveSolution& sol);

/// 𝒢(u) = ∫ e^{-uξ} P₂(ξ) dξ by quadrature; throws ConvergenceError outside
/// the strip u > -γ.
double mellin_moment(const WaveSolution& sol, double u);
/// Closed form (βC)^{u/β} Γ(2a) Γ(a+u/β)² / (Γ(a)² Γ(2a+u/β)), a = γ/β.
double mellin_moment_exact(const WaveSolution& sol, double u);

TabulatedCdf wave_cdf(const WaveSolution& sol, int cells = 4000);

// ---------------------------------------------------------------- tanh drift

struct TanhJumpDiffusion {
  double lambda = 0.0;
  double gamma = 1.0;
  double beta = 0.0;

  /// Throws DomainError unless λ >= 0, γ > 0 and 0 <= β < γ.
  void validate() const;
};

/// Transition density from 0 of dX = β tanh(βX)dt + dW + Laplace jumps:
/// ½[𝒩^{(+β)} + 𝒩^{(-β)}] convolved with the compound Poisson law of rate
/// λM(β) and normalized cosh-tilted jumps, by Fourier inversion.
double tanh_transient(double x, double t, const TanhJumpDiffusion& p);

/// Vectorized variant sharing the frequency grid across points.
std::vector<double> tanh_transient(const std::vector<double>& x, double t, const TanhJumpDiffusion& p);

TabulatedCdf tanh_transient_cdf(double t, const TanhJumpDiffusion& p, int cells = 4000);

/// ∫ tanh_transient by adaptive quadrature over the range the inversion resolves.
double tanh_transient_mass(double t, const TanhJumpDiffusion& p);

struct TiltedOuLaw {
  double alpha = 1.0;
  double lambda = 1.0;
  double gamma = 1.0;
  double beta = 0.0;
  double nu = 0.0;  // (1 - λ/α)/2

  static TiltedOuLaw make(double alpha, double lambda, double gamma, double beta);
};

/// ½[P^{(-β)} + P^{(+β)}] with
/// P^{(±β)}(y) = 2^ν γ^{1-ν} |y ± β/α|^{-ν} K_ν(γ|y ± β/α|) / (√π Γ(½ - ν)).
double ou_tanh_stationary(double y, const TiltedOuLaw& law);

TabulatedCdf ou_tanh_stationary_cdf(const TiltedOuLaw& law, int cells = 4000);

/// The same mixture convolved with the N(0, 1/(2α)) law of the OU-filtered
/// Brownian part, by Fourier inversion. Diagnostic companion of the above.
double ou_tanh_stationary_smoothed(double y, const TiltedOuLaw& law);

TabulatedCdf ou_tanh_stationary_smoothed_cdf(const TiltedOuLaw& law, int cells = 4000);

}  // namespace shotnoise
