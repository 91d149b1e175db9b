#include "shotnoise/closedform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "shotnoise/quadrature.hpp"
#include "shotnoise/specfun.hpp"

namespace shotnoise {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double interp(const std::vector<double>& x, const std::vector<double>& y, double v) {
  if (x.empty()) return 0.0;
  if (v <= x.front()) return y.front();
  if (v >= x.back()) return y.back();
  const auto it = std::upper_bound(x.begin(), x.end(), v);
  const std::size_t i = static_cast<std::size_t>(it - x.begin());
  const double w = (v - x[i - 1]) / (x[i] - x[i - 1]);
  return y[i - 1] + w * (y[i] - y[i - 1]);
}

// ∫_a^b g, switching to u = ln|ξ| when both ends share a sign and span a
// wide ratio, which turns 1/ξ-type integrands into smooth ones.
double integrate_ratio(const RealFn& g, double a, double b) {
  if (a == b) return 0.0;
  const QuadOptions opt{1e-14, 1e-13, 30};
  if (a > 0.0 && b > 0.0 && std::max(a, b) > 4.0 * std::min(a, b)) {
    return quad([&](double u) { const double x = std::exp(u); return g(x) * x; }, std::log(a), std::log(b), opt);
  }
  if (a < 0.0 && b < 0.0 && std::min(a, b) < 4.0 * std::max(a, b)) {
    return quad([&](double u) { const double x = -std::exp(u); return g(x) * x; }, std::log(-a), std::log(-b), opt);
  }
  return quad(g, a, b, opt);
}

// Even characteristic function sampled on a trapezoid frequency grid;
// density(x) = (1/π) ∫_0^K Φ(k) cos(kx) dk.
struct EvenInversion {
  double dk = 0.0;
  std::vector<double> weights;  // Φ(k_j) · trapezoid weight · dk / π

  EvenInversion(const std::function<double(double)>& phi, double k_max, double half_width) {
    dk = kPi / half_width;
    const int n = static_cast<int>(std::ceil(k_max / dk));
    weights.resize(n + 1);
    for (int j = 0; j <= n; ++j) weights[j] = (j == 0 ? 0.5 : 1.0) * phi(j * dk) * dk / kPi;
  }

  double operator()(double x) const {
    double s = 0.0;
    for (std::size_t j = 0; j < weights.size(); ++j) s += weights[j] * std::cos(static_cast<double>(j) * dk * x);
    return std::max(0.0, s);
  }

  // Integral of the periodized density from -π/dk to x, term by term.
  double cdf(double x) const {
    double s = weights[0] * (x + kPi / dk);
    for (std::size_t j = 1; j < weights.size(); ++j) {
      const double kj = static_cast<double>(j) * dk;
      s += weights[j] * std::sin(kj * x) / kj;
    }
    return s;
  }

  TabulatedCdf tabulate(double w, int cells) const {
    if (!(w > 0.0 && w < kPi / dk) || cells < 1) throw DomainError("EvenInversion: bad tabulation range");
    TabulatedCdf out;
    out.x.resize(cells + 1);
    out.F.resize(cells + 1);
    for (int i = 0; i <= cells; ++i) {
      out.x[i] = -w + 2.0 * w * i / cells;
      out.F[i] = cdf(out.x[i]);
    }
    // Fold the right tail beyond w (mirror of the left one) into the total.
    out.F.back() += out.F.front();
    for (std::size_t i = 1; i < out.F.size(); ++i) out.F[i] = std::max(out.F[i], out.F[i - 1]);
    return out;
  }
};

double normal_pdf(double x, double mean, double var) {
  const double z = x - mean;
  return std::exp(-0.5 * z * z / var) / std::sqrt(2.0 * kPi * var);
}

}  // namespace

// ---------------------------------------------------------------- TabulatedCdf

double TabulatedCdf::operator()(double v) const {
  double c = interp(x, F, v);
  if (atom_weight > 0.0 && v >= atom_at) c += atom_weight;
  return std::clamp(c, 0.0, 1.0);
}

double TabulatedCdf::left(double v) const {
  double c = interp(x, F, v);
  if (atom_weight > 0.0 && v > atom_at) c += atom_weight;
  return std::clamp(c, 0.0, 1.0);
}

TabulatedCdf tabulate_cdf(const RealFn& density, double lo, double hi, int cells,
                          const std::vector<double>& breakpoints, double atom_at, double atom_weight) {
  if (!(lo < hi) || cells < 1) throw DomainError("tabulate_cdf: requires lo < hi and cells >= 1");
  TabulatedCdf out;
  out.atom_at = atom_at;
  out.atom_weight = atom_weight;
  std::vector<double> nodes;
  nodes.reserve(cells + 1 + breakpoints.size());
  for (int i = 0; i <= cells; ++i) nodes.push_back(lo + (hi - lo) * i / cells);
  for (double b : breakpoints)
    if (b > lo && b < hi) nodes.push_back(b);
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  const QuadOptions opt{1e-13, 1e-10, 30};
  const auto singular = [&](double v) { return std::find(breakpoints.begin(), breakpoints.end(), v) != breakpoints.end(); };
  out.x = nodes;
  out.F.resize(nodes.size());
  double acc = quad(density, -kInf, lo, opt);
  out.F[0] = acc;
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const double a = nodes[i - 1], b = nodes[i];
    acc += singular(a) || singular(b) ? quad_singular_ends(density, a, b) : quad(density, a, b, opt);
    out.F[i] = acc;
  }
  // Right tail folded into the last node so total() is the full mass.
  out.F.back() += quad(density, hi, kInf, opt);
  return out;
}

// ---------------------------------------------------------------- stationary

GridFunction<double> stationary_m1(const RealFn& f, const RealFn& lambda_fn, double gamma, const GridSpec& grid,
                                   const Interval& support) {
  grid.validate();
  if (!(gamma > 0.0)) throw DomainError("stationary_m1: gamma must be positive");
  if (!(support.lo < support.hi)) throw DomainError("stationary_m1: empty support");

  std::vector<int> inside;
  for (int i = 0; i < grid.n; ++i) {
    const double x = grid.x(i);
    if (x > support.lo && x < support.hi) inside.push_back(i);
  }
  if (inside.empty()) throw DomainError("stationary_m1: no grid node inside the support");
  for (int i : inside)
    if (!(f(grid.x(i)) > 0.0)) throw DomainError("stationary_m1: requires f > 0 on the support");

  const RealFn ratio = [&](double x) { return lambda_fn(x) / f(x); };
  // Exponent g(x) = -ln f(x) - γx + ∫_{x_ref}^x λ/f, cumulated node to node
  // outward from the node nearest the grid midpoint.
  const std::size_t ref = inside.size() / 2;
  std::vector<double> G(inside.size(), 0.0);
  for (std::size_t k = ref + 1; k < inside.size(); ++k)
    G[k] = G[k - 1] + integrate_ratio(ratio, grid.x(inside[k - 1]), grid.x(inside[k]));
  for (std::size_t k = ref; k-- > 0;) G[k] = G[k + 1] - integrate_ratio(ratio, grid.x(inside[k]), grid.x(inside[k + 1]));

  std::vector<double> node_x(inside.size());
  std::vector<double> log_p(inside.size());
  double shift = -kInf;
  for (std::size_t k = 0; k < inside.size(); ++k) {
    node_x[k] = grid.x(inside[k]);
    log_p[k] = -std::log(f(node_x[k])) - gamma * node_x[k] + G[k];
    shift = std::max(shift, log_p[k]);
  }

  const RealFn unnormalized = [&](double x) {
    const double fx = f(x);
    if (!(fx > 0.0)) throw NormalizationError("stationary_m1: f is not positive on the support");
    auto it = std::lower_bound(node_x.begin(), node_x.end(), x);
    std::size_t k = static_cast<std::size_t>(it - node_x.begin());
    if (k == node_x.size() || (k > 0 && x - node_x[k - 1] < node_x[k] - x)) --k;
    const double g = -std::log(fx) - gamma * x + G[k] + integrate_ratio(ratio, node_x[k], x);
    return std::exp(g - shift);
  };

  double mass = 0.0;
  try {
    // Split at the grid range so the adaptive rule sees the bulk directly;
    // the tails then only need accuracy relative to the bulk.
    const double a = std::max(support.lo, grid.x_lo);
    const double b = std::min(support.hi, grid.x_hi);
    mass = quad(unnormalized, a, b, QuadOptions{1e-300, 1e-12, 30});
    const QuadOptions tail{1e-14 * std::abs(mass), 1e-12, 30};
    if (support.lo < a) mass += quad(unnormalized, support.lo, a, tail);
    if (support.hi > b) mass += quad(unnormalized, b, support.hi, tail);
  } catch (const ConvergenceError& e) {
    throw NormalizationError(std::string("stationary_m1: mass not resolved (") + e.what() + ")");
  }
  if (!std::isfinite(mass) || !(mass > 0.0)) throw NormalizationError("stationary_m1: mass is not finite");

  GridFunction<double> out{grid, Vector<double>::Zero(grid.n)};
  for (std::size_t k = 0; k < inside.size(); ++k) out.values[inside[k]] = std::exp(log_p[k] - shift) / mass;
  return out;
}

double stationary_ou_m2(double alpha, double lambda, double gamma, double x) {
  if (!(alpha > 0.0) || !(lambda > 0.0) || !(gamma > 0.0))
    throw DomainError("stationary_ou_m2: alpha, lambda, gamma must be positive");
  if (!(x >= 0.0)) throw DomainError("stationary_ou_m2: x must be >= 0");
  const double rho = lambda / alpha;
  const double nu = rho - 1.0;
  if (x == 0.0) {
    if (rho > 1.0) return 0.0;
    if (rho == 1.0) return gamma * std::exp(-1.0);
    return kInf;
  }
  const double z = 2.0 * std::sqrt(rho * gamma * x);
  const double bi = nu >= 0.0 ? bessel_i(nu, z) : detail::bessel_i_series(nu, z, 2000);
  if (!std::isfinite(bi)) throw ConvergenceError("stationary_ou_m2: Bessel factor overflows");
  if (bi == 0.0) return 0.0;
  const double log_p = std::log(gamma) - rho - gamma * x + 0.5 * nu * std::log(gamma * x / rho) + std::log(bi);
  return std::exp(log_p);
}

double cumulant(int j, int m, double gamma, double lambda, const RealFn& f) {
  if (j < 1 || m < 1) throw DomainError("cumulant: j and m must be >= 1");
  if (!(gamma > 0.0) || !(lambda >= 0.0)) throw DomainError("cumulant: requires gamma > 0, lambda >= 0");
  if (lambda == 0.0) return 0.0;
  const RealFn g = [&](double x) {
    const double fx = f(x);
    if (!(fx > 0.0)) throw DomainError("cumulant: requires f > 0 on (0, inf)");
    return std::pow(x, j) * lambda * erlang_survival(m, gamma, x) / fx;
  };
  try {
    const QuadOptions opt{1e-300, 1e-11, 30};
    // Split at the jump scale so both pieces are smooth for the rule.
    const double s = m / gamma;
    return quad(g, 0.0, s, opt) + quad(g, s, kInf, opt);
  } catch (const ConvergenceError& e) {
    throw ConvergenceError(std::string("cumulant: integral diverges or is unresolved (") + e.what() + ")");
  }
}

// ---------------------------------------------------------------- transient

void LinearShotNoise::validate() const {
  if (m < 1) throw DomainError("LinearShotNoise: m must be >= 1");
  if (!(alpha > 0.0) || !(lambda >= 0.0) || !(gamma > 0.0) || !std::isfinite(x0))
    throw DomainError("LinearShotNoise: requires alpha > 0, lambda >= 0, gamma > 0, finite x0");
}

double laplace_transform_linear(double u, double t, const LinearShotNoise& p) {
  p.validate();
  if (!(u >= 0.0) || !(t >= 0.0)) throw DomainError("laplace_transform_linear: requires u >= 0, t >= 0");
  if (u == 0.0) return 1.0;
  const double drift = u * p.x0 * std::exp(-p.alpha * t);
  if (t == 0.0 || p.lambda == 0.0) return std::exp(-drift);
  const RealFn g = [&](double s) {
    const double r = p.gamma / (p.gamma + u * std::exp(-p.alpha * (t - s)));
    return 1.0 - std::pow(r, p.m);
  };
  const double inner = quad(g, 0.0, t, QuadOptions{1e-13, 1e-12, 30});
  return std::exp(-drift - p.lambda * inner);
}

TransientPoint transient_m1_linear(double x, double t, const LinearShotNoise& p) {
  p.validate();
  if (p.m != 1) throw DomainError("transient_m1_linear: only m = 1 has a closed-form inverse");
  if (!(t > 0.0)) throw DomainError("transient_m1_linear: t must be positive");
  TransientPoint out;
  out.atom_location = p.x0 * std::exp(-p.alpha * t);
  out.atom_weight = std::exp(-p.lambda * t);
  const double z = x - out.atom_location;
  if (z <= 0.0 || p.lambda == 0.0) return out;
  const double rho = p.lambda / p.alpha;
  const double c = p.gamma * std::expm1(p.alpha * t);
  out.density = out.atom_weight * rho * c * std::exp(-p.gamma * z) * kummer_1f1(1.0 - rho, 2.0, -c * z);
  return out;
}

TabulatedCdf transient_m1_cdf(double t, const LinearShotNoise& p, int cells) {
  const TransientPoint at = transient_m1_linear(p.x0, t, p);
  const double rho = p.lambda / p.alpha;
  const double lo = at.atom_location;
  const double hi = lo + (60.0 + 5.0 * rho) / p.gamma;
  return tabulate_cdf([&](double x) { return transient_m1_linear(x, t, p).density; }, lo, hi, cells, {},
                      at.atom_location, at.atom_weight);
}

// ---------------------------------------------------------------- waves

WaveSolution gumbel_wave(double beta, double gamma) {
  if (!(beta > 0.0) || !(gamma > 0.0)) throw DomainError("gumbel_wave: beta and gamma must be positive");
  const double a = gamma / beta;
  WaveSolution s;
  s.m = 1;
  s.beta = beta;
  s.gamma = gamma;
  s.speed = std::exp(-digamma(a)) / beta;
  s.norm = std::exp(std::log(beta) - a * std::log(beta * s.speed) - log_gamma(a));
  return s;
}

WaveSolution whittaker_wave(double beta, double gamma) {
  if (!(beta > 0.0) || !(gamma > 0.0)) throw DomainError("whittaker_wave: beta and gamma must be positive");
  const double a = gamma / beta;
  WaveSolution s;
  s.m = 2;
  s.beta = beta;
  s.gamma = gamma;
  s.speed = std::exp(digamma(2.0 * a) - 2.0 * digamma(a)) / beta;
  s.norm = std::exp(std::log(beta) - (a - 0.5) * std::log(beta * s.speed) + log_gamma(2.0 * a) - 2.0 * log_gamma(a));
  return s;
}

double WaveSolution::profile(double xi) const {
  const double a = gamma / beta;
  const double bc = beta * speed;
  const double log_z = -beta * xi - std::log(bc);
  if (m == 1) {
    // 𝒩 e^{-γξ - Z}, Z = e^{-βξ}/(βC₁)
    if (log_z > 7.0) return 0.0;  // Z > 1000
    return norm * std::exp(-gamma * xi - std::exp(log_z));
  }
  // 𝒩 (βC₂)^{a-½} Z^a e^{-Z} U(a, 1, Z)
  if (log_z > 7.0) return 0.0;
  const double lead = std::log(norm) + (a - 0.5) * std::log(bc) + a * log_z;
  if (lead < -745.0) return 0.0;
  if (log_z < -600.0) {
    // U(a,1,Z) = -(ln Z + ψ(a) + 2γ_E)/Γ(a) + O(Z ln Z)
    return std::exp(lead - log_gamma(a)) * -(log_z + digamma(a) + 2.0 * std::numbers::egamma);
  }
  const double z = std::exp(log_z);
  return std::exp(lead - z) * kummer_u(a, 1.0, z);
}

double WaveSolution::psi(double xi) const {
  if (m != 2) throw DomainError("WaveSolution::psi: defined for m = 2 only");
  const double a = gamma / beta;
  const double z = std::exp(-beta * xi) / (beta * speed);
  return norm * std::exp(0.5 * beta * xi) * whittaker_w0(0.5 - a, z);
}

ProfileMoments profile_moments(const WaveSolution& sol) {
  const QuadOptions opt{1e-15, 1e-12, 30};
  const auto moment = [&](int k) {
    const RealFn g = [&](double xi) { return std::pow(xi, k) * sol.profile(xi); };
    return quad(g, -kInf, 0.0, opt) + quad(g, 0.0, kInf, opt);
  };
  ProfileMoments pm;
  pm.mass = moment(0);
  pm.mean = moment(1);
  pm.variance = moment(2) / pm.mass - (pm.mean / pm.mass) * (pm.mean / pm.mass);
  return pm;
}

double mellin_moment(const WaveSolution& sol, double u) {
  if (!(u > -sol.gamma))
    throw ConvergenceError("mellin_moment: integral diverges for u <= -gamma (outside the convergence strip)");
  const RealFn g = [&](double xi) {
    const double p = sol.profile(xi);
    return p == 0.0 ? 0.0 : std::exp(-u * xi + std::log(p));
  };
  const QuadOptions opt{1e-15, 1e-12, 30};
  return quad(g, -kInf, 0.0, opt) + quad(g, 0.0, kInf, opt);
}

double mellin_moment_exact(const WaveSolution& sol, double u) {
  const double a = sol.gamma / sol.beta;
  const double s = u / sol.beta;
  if (!(a + s > 0.0)) throw ConvergenceError("mellin_moment_exact: outside the convergence strip");
  const double lbc = std::log(sol.beta * sol.speed);
  if (sol.m == 1) return std::exp(s * lbc + log_gamma(a + s) - log_gamma(a));
  return std::exp(s * lbc + log_gamma(2 * a) + 2 * log_gamma(a + s) - 2 * log_gamma(a) - log_gamma(2 * a + s));
}

TabulatedCdf wave_cdf(const WaveSolution& sol, int cells) {
  const double lo = -(std::log(60.0 * sol.beta * sol.speed)) / sol.beta - 1.0;
  const double hi = 45.0 / sol.gamma;
  return tabulate_cdf([&](double xi) { return sol.profile(xi); }, lo, hi, cells);
}

// ---------------------------------------------------------------- tanh drift

void TanhJumpDiffusion::validate() const {
  if (!(lambda >= 0.0) || !(gamma > 0.0) || !(beta >= 0.0))
    throw DomainError("TanhJumpDiffusion: requires lambda >= 0, gamma > 0, beta >= 0");
  if (!(beta < gamma)) throw DomainError("TanhJumpDiffusion: requires beta < gamma (tilted jump law integrability)");
}

namespace {

EvenInversion tanh_inversion(double t, const TanhJumpDiffusion& p) {
  const double g2 = p.gamma * p.gamma;
  const double b2 = p.beta * p.beta;
  const double mass = g2 / (g2 - b2);
  const double rate = p.lambda * mass * t;
  const auto phi = [&](double k) {
    const double d = g2 - b2 + k * k;
    const double jump_cf = (g2 - b2) * d / (d * d + 4.0 * b2 * k * k);
    return std::cos(p.beta * t * k) * std::exp(-0.5 * t * k * k + rate * (jump_cf - 1.0));
  };
  const double k_max = std::sqrt(80.0 / t);
  const double half_width = p.beta * t + 10.0 * std::sqrt(t) + (40.0 + 2.0 * rate) / (p.gamma - p.beta);
  return EvenInversion(phi, k_max, half_width);
}

}  // namespace

double tanh_transient(double x, double t, const TanhJumpDiffusion& p) {
  return tanh_transient(std::vector<double>{x}, t, p).front();
}

std::vector<double> tanh_transient(const std::vector<double>& x, double t, const TanhJumpDiffusion& p) {
  p.validate();
  if (!(t > 0.0)) throw DomainError("tanh_transient: t must be positive");
  std::vector<double> out(x.size());
  if (p.lambda == 0.0) {
    for (std::size_t i = 0; i < x.size(); ++i)
      out[i] = 0.5 * (normal_pdf(x[i], p.beta * t, t) + normal_pdf(x[i], -p.beta * t, t));
    return out;
  }
  const EvenInversion inv = tanh_inversion(t, p);
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = inv(x[i]);
  return out;
}

namespace {

double tanh_range(double t, const TanhJumpDiffusion& p) {
  const double g2 = p.gamma * p.gamma;
  const double rate = p.lambda * g2 / (g2 - p.beta * p.beta) * t;
  return p.beta * t + 9.0 * std::sqrt(t) + (35.0 + 2.0 * rate) / (p.gamma - p.beta);
}

}  // namespace

double tanh_transient_mass(double t, const TanhJumpDiffusion& p) {
  p.validate();
  if (!(t > 0.0)) throw DomainError("tanh_transient_mass: t must be positive");
  const double w = tanh_range(t, p);
  const QuadOptions opt{1e-13, 1e-12, 30};
  if (p.lambda == 0.0) return quad([&](double x) { return tanh_transient(x, t, p); }, -kInf, kInf, opt);
  const EvenInversion inv = tanh_inversion(t, p);
  return quad([&](double x) { return inv(x); }, -w, w, opt);
}

TabulatedCdf tanh_transient_cdf(double t, const TanhJumpDiffusion& p, int cells) {
  p.validate();
  if (!(t > 0.0)) throw DomainError("tanh_transient_cdf: t must be positive");
  const double w = tanh_range(t, p);
  if (p.lambda == 0.0)
    return tabulate_cdf([&](double x) { return tanh_transient(x, t, p); }, -w, w, cells);
  return tanh_inversion(t, p).tabulate(w, cells);
}

TiltedOuLaw TiltedOuLaw::make(double alpha, double lambda, double gamma, double beta) {
  if (!(alpha > 0.0)) throw DomainError("TiltedOuLaw: alpha must be positive");
  if (!(lambda > 0.0)) throw DomainError("TiltedOuLaw: lambda must be positive (nu < 1/2)");
  if (!(gamma > 0.0)) throw DomainError("TiltedOuLaw: gamma must be positive");
  if (!(beta >= 0.0)) throw DomainError("TiltedOuLaw: beta must be >= 0");
  return TiltedOuLaw{alpha, lambda, gamma, beta, 0.5 * (1.0 - lambda / alpha)};
}

namespace {

// Symmetric variance-gamma component centered at 0.
double vg_component(double r, const TiltedOuLaw& law) {
  const double nu = law.nu;
  r = std::abs(r);
  const double log_c = nu * std::log(2.0) + (1.0 - nu) * std::log(law.gamma) - 0.5 * std::log(kPi) - log_gamma(0.5 - nu);
  if (r == 0.0 || law.gamma * r < 1e-280) {
    if (nu >= 0.0) return kInf;
    // |r|^{-ν} K_{|ν|}(γr) → ½ Γ(|ν|) (γ/2)^{ν}
    return std::exp(log_c + std::log(0.5) + log_gamma(-nu) + nu * std::log(0.5 * law.gamma));
  }
  const double k = bessel_k(nu, law.gamma * r);
  if (k == 0.0) return 0.0;
  return std::exp(log_c - nu * std::log(r) + std::log(k));
}

}  // namespace

double ou_tanh_stationary(double y, const TiltedOuLaw& law) {
  const double c = law.beta / law.alpha;
  return 0.5 * (vg_component(y - c, law) + vg_component(y + c, law));
}

TabulatedCdf ou_tanh_stationary_cdf(const TiltedOuLaw& law, int cells) {
  const double c = law.beta / law.alpha;
  const double w = c + (40.0 + 4.0 * std::abs(law.nu)) / law.gamma;
  return tabulate_cdf([&](double y) { return ou_tanh_stationary(y, law); }, -w, w, cells, {-c, c});
}

namespace {

EvenInversion smoothed_inversion(const TiltedOuLaw& law) {
  const double shape = law.lambda / (2.0 * law.alpha);
  const double g2 = law.gamma * law.gamma;
  const double c = law.beta / law.alpha;
  const auto phi = [&](double k) {
    return std::cos(c * k) * std::exp(-k * k / (4.0 * law.alpha) + shape * std::log(g2 / (g2 + k * k)));
  };
  const double k_max = std::sqrt(160.0 * law.alpha);
  const double half_width = c + 10.0 / std::sqrt(law.alpha) + (45.0 + 2.0 * shape) / law.gamma;
  return EvenInversion(phi, k_max, half_width);
}

}  // namespace

double ou_tanh_stationary_smoothed(double y, const TiltedOuLaw& law) { return smoothed_inversion(law)(y); }

TabulatedCdf ou_tanh_stationary_smoothed_cdf(const TiltedOuLaw& law, int cells) {
  const double c = law.beta / law.alpha;
  const double w = c + 9.0 / std::sqrt(law.alpha) + 40.0 / law.gamma;
  return smoothed_inversion(law).tabulate(w, cells);
}

}  // namespace shotnoise
