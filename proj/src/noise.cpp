#include "shotnoise/noise.hpp"

#include <cmath>

#include "shotnoise/specfun.hpp"

namespace shotnoise {

void ErlangJumpLaw::validate() const {
  if (m < 1) throw DomainError("ErlangJumpLaw: m must be >= 1");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("ErlangJumpLaw: gamma must be positive");
}

double ErlangJumpLaw::raw_moment(int j) const {
  double r = 1.0;
  for (int i = 0; i < j; ++i) r *= (m + i) / gamma;
  return r;
}

void SymmetricLaplaceLaw::validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("SymmetricLaplaceLaw: gamma must be positive");
}

TiltedJumpLaw TiltedJumpLaw::make(SymmetricLaplaceLaw base, double beta) {
  base.validate();
  if (!(beta >= 0.0)) throw DomainError("TiltedJumpLaw: beta must be >= 0");
  if (!(beta < base.gamma)) throw DomainError("TiltedJumpLaw: requires beta < gamma for a finite tilted mass");
  const double g2 = base.gamma * base.gamma;
  return TiltedJumpLaw{base, beta, g2 / (g2 - beta * beta)};
}

double erlang_pdf(const ErlangJumpLaw& law, double x) {
  law.validate();
  if (x < 0.0) return 0.0;
  if (x == 0.0) return law.m == 1 ? law.gamma : 0.0;
  return std::exp(law.m * std::log(law.gamma) + (law.m - 1) * std::log(x) - law.gamma * x - log_gamma(law.m));
}

double erlang_cdf(const ErlangJumpLaw& law, double x) {
  law.validate();
  if (x <= 0.0) return 0.0;
  return 1.0 - erlang_survival(law.m, law.gamma, x);
}

double laplace_pdf(const SymmetricLaplaceLaw& law, double x) {
  law.validate();
  return 0.5 * law.gamma * std::exp(-law.gamma * std::abs(x));
}

double laplace_cdf(const SymmetricLaplaceLaw& law, double x) {
  law.validate();
  const double tail = 0.5 * std::exp(-law.gamma * std::abs(x));
  return x < 0.0 ? tail : 1.0 - tail;
}

double tilted_pdf(const TiltedJumpLaw& law, double y) {
  // e^{-γ|y|} cosh(βy) written without the overflowing cosh
  const double g = law.base.gamma, a = std::abs(y);
  return 0.25 * g * (std::exp(-(g - law.beta) * a) + std::exp(-(g + law.beta) * a)) / law.mass;
}

double erlang_sample(const ErlangJumpLaw& law, RngStream& rng) {
  double s = 0.0;
  for (int i = 0; i < law.m; ++i) s += rng.exponential(law.gamma);
  return s;
}

double laplace_sample(const SymmetricLaplaceLaw& law, RngStream& rng) {
  const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
  return sign * rng.exponential(law.gamma);
}

double tilted_sample(const TiltedJumpLaw& law, RngStream& rng) {
  const double g = law.base.gamma;
  const double b = law.beta;
  const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
  const double slow_weight = (g + b) / (2.0 * g);
  const double rate = rng.uniform() < slow_weight ? g - b : g + b;
  return sign * rng.exponential(rate);
}

std::uint64_t poisson_sample(double mean, RngStream& rng) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) throw DomainError("poisson_sample: mean must be finite and >= 0");
  if (mean == 0.0) return 0;
  constexpr double kPiece = 30.0;
  const int pieces = static_cast<int>(std::ceil(mean / kPiece));
  const double mu = mean / pieces;
  std::uint64_t total = 0;
  for (int p = 0; p < pieces; ++p) {
    const double u = rng.uniform();
    double prob = std::exp(-mu);
    double cdf = prob;
    std::uint64_t k = 0;
    while (u > cdf) {
      ++k;
      prob *= mu / static_cast<double>(k);
      cdf += prob;
      if (prob == 0.0) break;  // u beyond the representable tail
    }
    total += k;
  }
  return total;
}

}  // namespace shotnoise
