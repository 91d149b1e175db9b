#pragma once

#include <cstdint>

#include "shotnoise/errors.hpp"
#include "shotnoise/rng.hpp"

namespace shotnoise {

/// Erlang(m, γ): sum of m exponentials of rate γ, support x >= 0.
struct ErlangJumpLaw {
  int m = 1;
  double gamma = 1.0;

  void validate() const;
  double mean() const { return m / gamma; }
  /// E[J^j] = Γ(m+j) / (Γ(m) γ^j).
  double raw_moment(int j) const;
};

/// Two-sided exponential (γ/2) e^{-γ|x|}.
struct SymmetricLaplaceLaw {
  double gamma = 1.0;

  void validate() const;
};

/// φ(y) cosh(βy) for the Laplace law φ, normalized by its mass
/// M(β) = γ²/(γ² - β²). Build through make() so mass is consistent.
struct TiltedJumpLaw {
  SymmetricLaplaceLaw base;
  double beta = 0.0;
  double mass = 1.0;

  /// Throws DomainError unless 0 <= β < γ.
  static TiltedJumpLaw make(SymmetricLaplaceLaw base, double beta);
};

double erlang_pdf(const ErlangJumpLaw& law, double x);
double erlang_cdf(const ErlangJumpLaw& law, double x);
double laplace_pdf(const SymmetricLaplaceLaw& law, double x);
double laplace_cdf(const SymmetricLaplaceLaw& law, double x);
/// Normalized tilted density φ(y)cosh(βy)/M(β).
double tilted_pdf(const TiltedJumpLaw& law, double y);

double erlang_sample(const ErlangJumpLaw& law, RngStream& rng);
double laplace_sample(const SymmetricLaplaceLaw& law, RngStream& rng);
/// Sign first, then the half-line mixture of exponentials with rates γ-β
/// (weight (γ+β)/(2γ)) and γ+β.
double tilted_sample(const TiltedJumpLaw& law, RngStream& rng);

/// Poisson(mean) by sequential inverse-CDF search; large means are split
/// into pieces below 30 so e^{-mean} never underflows.
std::uint64_t poisson_sample(double mean, RngStream& rng);

struct JumpIncrement {
  double value = 0.0;
  std::uint64_t jumps = 0;
};

/// Sum of N i.i.d. jumps with N ~ Poisson(rate·dt).
template <class Sampler>
JumpIncrement compound_poisson_increment(double rate, Sampler&& sample, double dt, RngStream& rng) {
  if (!(rate >= 0.0)) throw DomainError("compound_poisson_increment: rate must be >= 0");
  if (!(dt > 0.0)) throw DomainError("compound_poisson_increment: dt must be positive");
  JumpIncrement out;
  if (rate == 0.0) return out;
  out.jumps = poisson_sample(rate * dt, rng);
  for (std::uint64_t i = 0; i < out.jumps; ++i) out.value += sample(rng);
  return out;
}

/// Homogeneous Poisson arrivals generated from exponential gaps. Consuming
/// arrivals up to a horizon gives the same jump times and sizes whatever
/// the step size, which couples runs at different dt.
template <class Sampler>
class ArrivalClock {
 public:
  ArrivalClock(double rate, Sampler sample, RngStream rng)
      : rate_(rate), sample_(sample), rng_(rng), next_(rate > 0.0 ? rng_.exponential(rate) : -1.0) {}

  /// Consume all arrivals with time <= horizon.
  JumpIncrement advance_to(double horizon) {
    JumpIncrement out;
    if (rate_ <= 0.0) return out;
    while (next_ <= horizon) {
      out.value += sample_(rng_);
      ++out.jumps;
      next_ += rng_.exponential(rate_);
    }
    return out;
  }

 private:
  double rate_;
  Sampler sample_;
  RngStream rng_;
  double next_;
};

}  // namespace shotnoise
