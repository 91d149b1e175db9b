#include "shotnoise/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "shotnoise/errors.hpp"

namespace shotnoise {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Taylor coefficients of 1/Γ(z) = Σ_{k>=1} c_k z^k (c_0 = 0 omitted).
constexpr std::array<double, 30> kRecipGamma = {
    1.0,
    0.57721566490153286061,
    -0.65587807152025388108,
    -0.042002635034095235529,
    0.1665386113822914895,
    -0.042197734555544336748,
    -0.0096219715278769735621,
    0.0072189432466630995424,
    -0.0011651675918590651121,
    -0.00021524167411495097282,
    0.00012805028238811618615,
    -0.000020134854780788238656,
    -1.2504934821426706573e-6,
    1.1330272319816958824e-6,
    -2.0563384169776071035e-7,
    6.1160951044814158179e-9,
    5.0020076444692229301e-9,
    -1.1812745704870201446e-9,
    1.0434267116911005105e-10,
    7.782263439905071254e-12,
    -3.6968056186422057082e-12,
    5.100370287454475979e-13,
    -2.0583260535665067832e-14,
    -5.3481225394230179824e-15,
    1.2267786282382607902e-15,
    -1.1812593016974587695e-16,
    1.1866922547516003326e-18,
    1.4123806553180317816e-18,
    -2.2987456844353702066e-19,
    1.7144063219273374334e-20,
};

bool is_nonpositive_integer(double a) { return a <= 0.0 && a == std::floor(a); }

// 1/Γ(x) for any real x (zero at the poles).
double recip_gamma(double x) {
  if (x > 0.0) return std::exp(-log_gamma(x));
  if (is_nonpositive_integer(x)) return 0.0;
  return std::sin(kPi * x) * std::exp(log_gamma(1.0 - x)) / kPi;
}

// Temme's auxiliary quantities for |mu| <= 1/2:
// gam1 = (1/Γ(1-μ) - 1/Γ(1+μ)) / (2μ), gam2 = (1/Γ(1-μ) + 1/Γ(1+μ)) / 2.
struct TemmeGammas {
  double gam1, gam2, gampl, gammi;
};

TemmeGammas temme_gammas(double mu) {
  double even = 0.0;  // Σ c_{2j} μ^{2j-2}
  double odd = 0.0;   // Σ c_{2j+1} μ^{2j}
  const double mu2 = mu * mu;
  for (int k = static_cast<int>(kRecipGamma.size()); k >= 1; --k) {
    if (k % 2 == 0)
      even = even * mu2 + kRecipGamma[k - 1];
    else
      odd = odd * mu2 + kRecipGamma[k - 1];
  }
  const double gam1 = -even;
  const double gam2 = odd;
  const double gampl = odd + mu * even;
  const double gammi = odd - mu * even;
  return {gam1, gam2, gampl, gammi};
}

double series_1f1(double a, double b, double z, int max_terms) {
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < max_terms; ++k) {
    term *= (a + k) * z / ((b + k) * (k + 1));
    sum += term;
    if (term == 0.0 || std::abs(term) <= 0.5 * kEps * std::abs(sum)) return sum;
    if (!std::isfinite(sum)) break;
  }
  throw ConvergenceError("kummer_1f1: series did not converge within max_terms");
}

// Terminating sum for a = -n.
double polynomial_1f1(double a, double b, double z) {
  const int n = static_cast<int>(-a);
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < n; ++k) {
    term *= (a + k) * z / ((b + k) * (k + 1));
    sum += term;
  }
  return sum;
}

// Σ_s (p)_s (q)_s / s! · w^{-s}, stopped at the smallest term. Returns false if
// the smallest term is not small enough to trust.
bool asymptotic_sum(double p, double q, double w, int max_terms, double& out) {
  double term = 1.0;
  double sum = 1.0;
  double last = 1.0;
  for (int s = 0; s < max_terms; ++s) {
    const double next = term * (p + s) * (q + s) / ((s + 1) * w);
    if (std::abs(next) > std::abs(last) && s > 0) break;
    term = next;
    sum += term;
    last = term;
    if (term == 0.0 || std::abs(term) <= 0.5 * kEps * std::abs(sum)) {
      out = sum;
      return true;
    }
  }
  out = sum;
  return std::abs(last) <= 1e-13 * std::abs(sum);
}

double positive_1f1(double a, double b, double z, const Accuracy& acc) {
  // z > 0 here.
  if (is_nonpositive_integer(a)) return polynomial_1f1(a, b, z);
  constexpr double kSwitch = 60.0;
  if (z > kSwitch) {
    double s = 0.0;
    if (asymptotic_sum(b - a, 1.0 - a, z, acc.max_terms, s)) {
      const double ra = recip_gamma(a);
      const double log_mag = z + (a - b) * std::log(z) + log_gamma(b);
      return ra * std::exp(log_mag) * s;
    }
  }
  return series_1f1(a, b, z, acc.max_terms);
}

}  // namespace

void Accuracy::validate() const {
  if (!(abs_tol > 0.0)) throw DomainError("Accuracy: abs_tol must be positive");
  if (max_terms < 1) throw DomainError("Accuracy: max_terms must be >= 1");
}

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("log_gamma: x must be positive and finite");
  // Shift to z >= 10, then Stirling with Bernoulli corrections, all in
  // extended precision so ln Γ keeps ~1e-15 absolute accuracy up to 1e3.
  long double z = x;
  long double prod = 1.0L;
  while (z < 10.0L) {
    prod *= z;
    z += 1.0L;
  }
  const long double r = 1.0L / z;
  const long double r2 = r * r;
  const long double series =
      r * (1.0L / 12 +
           r2 * (-1.0L / 360 +
                 r2 * (1.0L / 1260 +
                       r2 * (-1.0L / 1680 +
                             r2 * (1.0L / 1188 +
                                   r2 * (-691.0L / 360360 + r2 * (1.0L / 156 + r2 * (-3617.0L / 122400))))))));
  const long double half_log_2pi = 0.918938533204672741780329736405617639861L;
  const long double stirling = (z - 0.5L) * std::log(z) - z + half_log_2pi + series;
  return static_cast<double>(stirling - std::log(prod));
}

double digamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("digamma: x must be positive and finite");
  long double z = x;
  long double acc = 0.0L;
  while (z < 6.0L) {
    acc -= 1.0L / z;
    z += 1.0L;
  }
  const long double f = 1.0L / (z * z);
  const long double tail =
      f * (-1.0L / 12 +
           f * (1.0L / 120 +
                f * (-1.0L / 252 + f * (1.0L / 240 + f * (-1.0L / 132 + f * (691.0L / 32760 + f * (-1.0L / 12)))))));
  return static_cast<double>(acc + std::log(z) - 0.5L / z + tail);
}

double detail::bessel_i_series(double nu, double x, int max_terms) {
  if (x == 0.0) return nu == 0.0 ? 1.0 : (nu > 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
  const double q = 0.25 * x * x;
  double term = std::exp(nu * std::log(0.5 * x) - log_gamma(nu + 1.0));
  double sum = term;
  for (int k = 1; k <= max_terms; ++k) {
    term *= q / (k * (k + nu));
    sum += term;
    if (term <= 0.5 * kEps * sum) return sum;
  }
  throw ConvergenceError("bessel_i: power series did not converge within max_terms");
}

double bessel_i(double nu, double x, const Accuracy& acc) {
  acc.validate();
  if (!(nu >= 0.0)) throw DomainError("bessel_i: order must be >= 0");
  if (!(x >= 0.0)) throw DomainError("bessel_i: x must be >= 0");
  if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;

  if (x > 30.0 && x > nu * nu) {
    // Hankel expansion; the e^{-x} companion is below double precision here.
    const double mu = 4.0 * nu * nu;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k <= acc.max_terms; ++k) {
      const double odd = 2.0 * k - 1.0;
      const double next = -term * (mu - odd * odd) / (8.0 * k * x);
      if (std::abs(next) > std::abs(term)) break;
      term = next;
      sum += term;
      if (std::abs(term) <= 0.5 * kEps * std::abs(sum)) break;
    }
    return std::exp(x) / std::sqrt(2.0 * kPi * x) * sum;
  }
  return detail::bessel_i_series(nu, x, acc.max_terms);
}

double bessel_k(double nu, double x, const Accuracy& acc) {
  acc.validate();
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("bessel_k: x must be positive and finite");
  nu = std::abs(nu);

  // Temme's series (x < 2) or Steed's continued fraction (x >= 2) for
  // K_μ and K_{μ+1} with |μ| <= 1/2, then upward recurrence in the order.
  const int nl = static_cast<int>(nu + 0.5);
  const double mu = nu - nl;
  const double mu2 = mu * mu;
  const double xi = 1.0 / x;
  const double xi2 = 2.0 * xi;
  double k_mu = 0.0;
  double k_mu1 = 0.0;

  if (x < 2.0) {
    const double x2 = 0.5 * x;
    const double pimu = kPi * mu;
    const double fact = std::abs(pimu) < kEps ? 1.0 : pimu / std::sin(pimu);
    double d = -std::log(x2);
    double e = mu * d;
    const double fact2 = std::abs(e) < kEps ? 1.0 : std::sinh(e) / e;
    const TemmeGammas g = temme_gammas(mu);
    double ff = fact * (g.gam1 * std::cosh(e) + g.gam2 * fact2 * d);
    double sum = ff;
    e = std::exp(e);
    double p = 0.5 * e / g.gampl;
    double q = 0.5 / (e * g.gammi);
    double c = 1.0;
    d = x2 * x2;
    double sum1 = p;
    int i = 1;
    for (; i <= acc.max_terms; ++i) {
      ff = (i * ff + p + q) / (i * i - mu2);
      c *= d / i;
      p /= (i - mu);
      q /= (i + mu);
      const double del = c * ff;
      sum += del;
      sum1 += c * (p - i * ff);
      if (std::abs(del) < std::abs(sum) * kEps) break;
    }
    if (i > acc.max_terms) throw ConvergenceError("bessel_k: Temme series did not converge");
    k_mu = sum;
    k_mu1 = sum1 * xi2;
  } else {
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d;
    double delh = d;
    double q1 = 0.0;
    double q2 = 1.0;
    const double a1 = 0.25 - mu2;
    double q = a1;
    double c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    int i = 2;
    for (; i <= acc.max_terms; ++i) {
      a -= 2 * (i - 1);
      c = -a * c / i;
      const double qnew = (q1 - b * q2) / a;
      q1 = q2;
      q2 = qnew;
      q += c * qnew;
      b += 2.0;
      d = 1.0 / (b + a * d);
      delh = (b * d - 1.0) * delh;
      h += delh;
      const double dels = q * delh;
      s += dels;
      if (std::abs(dels / s) < kEps) break;
    }
    if (i > acc.max_terms) throw ConvergenceError("bessel_k: Steed continued fraction did not converge");
    h = a1 * h;
    k_mu = std::sqrt(kPi / (2.0 * x)) * std::exp(-x) / s;
    k_mu1 = k_mu * (mu + x + 0.5 - h) * xi;
  }

  for (int i = 1; i <= nl; ++i) {
    const double next = (mu + i) * xi2 * k_mu1 + k_mu;
    k_mu = k_mu1;
    k_mu1 = next;
  }
  return k_mu;
}

double erlang_survival(int m, double gamma, double x) {
  if (m < 1) throw DomainError("erlang_survival: m must be >= 1");
  if (!(gamma > 0.0)) throw DomainError("erlang_survival: gamma must be positive");
  if (!(x >= 0.0)) throw DomainError("erlang_survival: x must be >= 0");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  const double y = gamma * x;
  const double log_y = std::log(y);
  double sum = 0.0;
  double log_fact = 0.0;
  for (int k = 0; k < m; ++k) {
    if (k > 0) log_fact += std::log(static_cast<double>(k));
    sum += std::exp(-y + k * log_y - log_fact);
  }
  return std::min(1.0, sum);
}

namespace {

// b = 1 logarithmic case:
// U(a,1,z) = -Γ(a)^{-1} Σ (a)_k z^k/(k!)² [ln z + ψ(a+k) - 2ψ(1+k)].
double kummer_u_b1_series(double a, double z) {
  const double log_z = std::log(z);
  double psi_a = digamma(a);
  double psi_1 = -std::numbers::egamma;
  double term = 1.0;  // (a)_k z^k / (k!)²
  double sum = 0.0;
  for (int k = 0; k < 400; ++k) {
    const double piece = term * (log_z + psi_a - 2.0 * psi_1);
    sum += piece;
    if (k > 2 && std::abs(piece) <= 1e-17 * std::abs(sum)) return -sum * std::exp(-log_gamma(a));
    psi_a += 1.0 / (a + k);
    psi_1 += 1.0 / (k + 1.0);
    term *= (a + k) * z / ((k + 1.0) * (k + 1.0));
  }
  throw ConvergenceError("kummer_u: small-argument series did not converge");
}

}  // namespace

double kummer_u(double a, double b, double z) {
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("kummer_u: a must be positive");
  if (!(z > 0.0) || !std::isfinite(z)) throw DomainError("kummer_u: z must be positive");
  if (!std::isfinite(b)) throw DomainError("kummer_u: b must be finite");

  if (b == 1.0 && z <= 1.0) return kummer_u_b1_series(a, z);

  // U(a,b,z) = Γ(a)^{-1} ∫_0^∞ e^{-zt} t^{a-1} (1+t)^{b-a-1} dt, evaluated with
  // the exp-sinh map t = exp(π/2 sinh s) and the trapezoid rule in s. The
  // integrand is handled in log form so tiny a or extreme z do not underflow.
  const double half_pi = 0.5 * kPi;
  auto log_integrand = [&](double s) {
    const double u = half_pi * std::sinh(s);
    if (u > 700.0) return -std::numeric_limits<double>::infinity();
    const double t = std::exp(u);
    return -z * t + a * u + (b - a - 1.0) * std::log1p(t) + std::log(half_pi * std::cosh(s));
  };

  constexpr double kSpan = 16.0;
  constexpr double kH0 = 0.25;
  constexpr int kCoarse = static_cast<int>(kSpan / kH0);
  double coarse[2 * kCoarse + 1];
  double peak = -std::numeric_limits<double>::infinity();
  for (int k = -kCoarse; k <= kCoarse; ++k) {
    coarse[k + kCoarse] = log_integrand(k * kH0);
    peak = std::max(peak, coarse[k + kCoarse]);
  }
  if (!std::isfinite(peak)) throw ConvergenceError("kummer_u: integrand vanishes on the whole range");

  int k_lo = kCoarse;
  int k_hi = -kCoarse;
  for (int k = -kCoarse; k <= kCoarse; ++k) {
    if (coarse[k + kCoarse] > peak - 60.0) {
      k_lo = std::min(k_lo, k);
      k_hi = std::max(k_hi, k);
    }
  }
  k_lo -= 4;
  k_hi += 4;

  double h = kH0;
  double sum = 0.0;
  for (int k = k_lo; k <= k_hi; ++k)
    sum += std::exp((std::abs(k) <= kCoarse ? coarse[k + kCoarse] : log_integrand(k * kH0)) - peak);
  double estimate = h * sum;
  const double s_lo = k_lo * kH0;
  const int n_hi = k_hi - k_lo;
  // The double-exponential trapezoid error roughly squares when h halves,
  // so agreement to 1e-12 leaves the refined value near rounding level.
  for (int level = 1; level <= 10; ++level) {
    double added = 0.0;
    const int n_mid = n_hi << (level - 1);
    for (int j = 0; j < n_mid; ++j) added += std::exp(log_integrand(s_lo + (j + 0.5) * h) - peak);
    sum += added;
    h *= 0.5;
    const double refined = h * sum;
    const bool done = std::abs(refined - estimate) <= 1e-12 * std::abs(refined);
    estimate = refined;
    if (done) return std::exp(peak - log_gamma(a)) * estimate;
  }
  throw ConvergenceError("kummer_u: trapezoid refinement did not converge");
}

double whittaker_w0(double kappa, double z) {
  const double a = 0.5 - kappa;
  if (!(a > 0.0)) throw DomainError("whittaker_w0: requires 1/2 - kappa > 0");
  if (!(z > 0.0)) throw DomainError("whittaker_w0: z must be positive");
  return std::exp(-0.5 * z) * std::sqrt(z) * kummer_u(a, 1.0, z);
}

double kummer_1f1(double a, double b, double z, const Accuracy& acc) {
  acc.validate();
  if (!(b > 0.0)) throw DomainError("kummer_1f1: b must be positive");
  if (!std::isfinite(a) || !std::isfinite(z)) throw DomainError("kummer_1f1: arguments must be finite");
  if (z == 0.0 || a == 0.0) return 1.0;
  if (is_nonpositive_integer(a)) return polynomial_1f1(a, b, z);
  if (z > 0.0) return positive_1f1(a, b, z, acc);

  const double w = -z;
  const double c = b - a;
  constexpr double kSwitch = 60.0;
  if (w <= kSwitch || is_nonpositive_integer(c)) {
    // Kummer's transformation ₁F₁(a;b;-w) = e^{-w} ₁F₁(b-a;b;w).
    return std::exp(-w) * positive_1f1(c, b, w, acc);
  }
  double s = 0.0;
  if (!asymptotic_sum(a, a - b + 1.0, w, acc.max_terms, s))
    throw ConvergenceError("kummer_1f1: large-argument expansion did not converge");
  return std::exp(log_gamma(b) - a * std::log(w)) * recip_gamma(c) * s;
}

}  // namespace shotnoise
