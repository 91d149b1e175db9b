#include "shotnoise/master.hpp"

#include <algorithm>
#include <cmath>

#include "shotnoise/rng.hpp"

namespace shotnoise {

void GridSpec::validate() const {
  if (!std::isfinite(x_lo) || !std::isfinite(x_hi) || !(x_lo < x_hi))
    throw DomainError("GridSpec: requires finite x_lo < x_hi");
  if (n < 9) throw DomainError("GridSpec: requires n >= 9");
}

GridSpec GridSpec::trimmed(int k) const {
  if (n - 2 * k < 1) throw BoundaryError("GridSpec::trimmed: stencil margin exceeds grid");
  const double step = h();
  GridSpec g;
  g.x_lo = x_lo + k * step;
  g.x_hi = x_hi - k * step;
  g.n = n - 2 * k;
  return g;
}

void ModelSpec::validate() const {
  jumps.validate();
  struct DriftCheck {
    void operator()(const ZeroDrift&) const {}
    void operator()(const ConstantDrift& c) const {
      if (!std::isfinite(c.k)) throw DomainError("ConstantDrift: k must be finite");
    }
    void operator()(const LinearRestoring& l) const {
      if (!(l.alpha > 0.0)) throw DomainError("LinearRestoring: alpha must be positive");
    }
    void operator()(const TanhRepulsive& t) const {
      if (!(t.beta > 0.0)) throw DomainError("TanhRepulsive: beta must be positive");
    }
  };
  std::visit(DriftCheck{}, drift);
  if (!(sigma_of(diffusion) >= 0.0)) throw DomainError("ConstantDiffusion: sigma must be >= 0");
  if (const auto* c = std::get_if<ConstantRate>(&rate)) {
    if (!(c->lambda >= 0.0)) throw DomainError("ConstantRate: lambda must be >= 0");
  } else {
    const auto& e = std::get<ExpDecayCentered>(rate);
    if (!(e.beta > 0.0) || !std::isfinite(e.reference)) throw DomainError("ExpDecayCentered: beta must be positive");
  }
}

OrderFit fit_order(const std::vector<double>& h, const std::vector<double>& err) {
  if (h.size() != err.size()) throw DomainError("fit_order: size mismatch");
  if (h.size() < 3) throw InsufficientDataError("fit_order: needs at least three refinement levels");
  std::vector<std::size_t> idx(h.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return h[a] < h[b]; });
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int k = 0; k < 3; ++k) {
    const double e = err[idx[k]];
    if (!(e > 0.0)) throw DomainError("fit_order: errors must be positive");
    const double lx = std::log(h[idx[k]]);
    const double ly = std::log(e);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double slope = (3 * sxy - sx * sy) / (3 * sxx - sx * sx);
  return {slope, (sy - slope * sx) / 3};
}

void CertificateConfig::validate() const {
  if (levels.size() < 3) throw InsufficientDataError("certificate: needs at least three refinement levels");
  for (int n : levels)
    if (n < 9) throw DomainError("certificate: every level needs n >= 9");
  if (!(x_lo < x_hi)) throw DomainError("certificate: requires x_lo < x_hi");
  if (components < 1 || densities < 1) throw DomainError("certificate: components and densities must be >= 1");
  if (!(alpha > 0.0) || !(sigma >= 0.0) || !(lambda >= 0.0) || !(gamma > 0.0))
    throw DomainError("certificate: invalid model parameters");
}

CertificateResult generator_certificate(int m, const CertificateConfig& cfg) {
  using L = long double;
  if (m < 1 || m > 4) throw DomainError("certificate: m must be in 1..4");
  cfg.validate();

  ModelSpec model;
  model.drift = LinearRestoring{cfg.alpha};
  model.diffusion = ConstantDiffusion{cfg.sigma};
  model.rate = ConstantRate{cfg.lambda};
  model.jumps = ErlangJumpLaw{m, cfg.gamma};

  struct Bump {
    L weight, center, width;
  };
  std::vector<std::vector<Bump>> mixtures;
  for (int d = 0; d < cfg.densities; ++d) {
    RngStream rng(cfg.seed, static_cast<std::uint64_t>(100 * m + d));
    std::vector<Bump> mix;
    L total = 0;
    for (int c = 0; c < cfg.components; ++c) {
      Bump b{0.5L + rng.uniform(), -2.5L + 5.0L * rng.uniform(), 0.6L + 0.5L * rng.uniform()};
      total += b.weight;
      mix.push_back(b);
    }
    for (auto& b : mix) b.weight /= total;
    mixtures.push_back(mix);
  }

  CertificateResult result;
  result.m = m;
  std::vector<double> hs, diffs, masses;
  for (int n : cfg.levels) {
    const GridSpec spec{cfg.x_lo, cfg.x_hi, n};
    CertificateLevel level;
    level.n = n;
    level.h = spec.h();
    for (const auto& mix : mixtures) {
      const auto P = GridFunction<L>::sample(spec, [&](L x) {
        L v = 0;
        for (const auto& b : mix) {
          const L z = (x - b.center) / b.width;
          v += b.weight * std::exp(-0.5L * z * z) / (b.width * 2.5066282746310005024L);
        }
        return v;
      });
      const auto integral = integral_generator(P, model);
      const auto lhs = apply_shift_power(integral, cfg.gamma, m);
      const auto rhs = differential_generator(P, model);
      const double diff = static_cast<double>((lhs.values - rhs.values).cwiseAbs().maxCoeff());
      level.max_diff = std::max(level.max_diff, diff);
      level.mass_defect = std::max(level.mass_defect, std::abs(grid_mass(integral)));
    }
    hs.push_back(level.h);
    diffs.push_back(level.max_diff);
    masses.push_back(level.mass_defect);
    result.levels.push_back(level);
  }
  result.order = fit_order(hs, diffs).order;
  try {
    result.mass_order = fit_order(hs, masses).order;
  } catch (const DomainError&) {
    result.mass_order = std::numeric_limits<double>::infinity();  // exactly conserved at some level
  }
  result.passed = result.order >= kOrderThreshold;
  return result;
}

}  // namespace shotnoise
