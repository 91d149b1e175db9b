#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "shotnoise/closedform.hpp"
#include "shotnoise/errors.hpp"
#include "shotnoise/master.hpp"

using namespace shotnoise;

namespace {

double gauss(double x, double mu, double s) {
  const double z = (x - mu) / s;
  return std::exp(-0.5 * z * z) / (s * std::sqrt(2.0 * std::numbers::pi));
}

// Derivatives of the N(μ, s²) density: P, P', P'', P'''.
struct GaussJet {
  double p, p1, p2, p3;
};
GaussJet gauss_jet(double x, double mu, double s) {
  const double z = (x - mu) / s, p = gauss(x, mu, s);
  return {p, -z / s * p, (z * z - 1.0) / (s * s) * p, -(z * z * z - 3.0 * z) / (s * s * s) * p};
}

double max_abs(const Eigen::VectorXd& v) { return v.cwiseAbs().maxCoeff(); }

ModelSpec ou_model(double alpha, double sigma, double lambda, int m, double gamma) {
  ModelSpec s;
  s.drift = LinearRestoring{alpha};
  s.diffusion = ConstantDiffusion{sigma};
  s.rate = ConstantRate{lambda};
  s.jumps = ErlangJumpLaw{m, gamma};
  return s;
}

}  // namespace

TEST_SUITE("master") {
  TEST_CASE("grid specs") {
    CHECK_THROWS_AS((GridSpec{0.0, 1.0, 8}).validate(), DomainError);
    CHECK_THROWS_AS((GridSpec{1.0, 1.0, 20}).validate(), DomainError);
    const GridSpec g{-1.0, 1.0, 21};
    CHECK(g.h() == doctest::Approx(0.1));
    const GridSpec t = g.trimmed(3);
    CHECK(t.n == 15);
    CHECK(t.x_lo == doctest::Approx(-0.7));
    CHECK_THROWS_AS(g.trimmed(11), BoundaryError);
    auto f = GridFunction<double>::sample(g, [](double x) { return x; });
    f.values[4] = std::nan("");
    CHECK_THROWS_AS(f.validate(), BoundaryError);
  }

  TEST_CASE("zero density and zero dynamics give zero") {
    const GridSpec g{-10.0, 10.0, 201};
    const auto model = ou_model(0.7, 0.5, 1.2, 2, 1.5);
    const auto zero = GridFunction<double>::sample(g, [](double) { return 0.0; });
    CHECK(max_abs(integral_generator(zero, model).values) == 0.0);
    CHECK(max_abs(differential_generator(zero, model).values) == 0.0);

    ModelSpec idle;
    idle.rate = ConstantRate{0.0};
    const auto P = GridFunction<double>::sample(g, [](double x) { return gauss(x, 0.0, 1.0); });
    CHECK(max_abs(integral_generator(P, idle).values) == 0.0);
    CHECK(max_abs(differential_generator(P, idle).values) == 0.0);
  }

  TEST_CASE("generators are linear") {
    const GridSpec g{-12.0, 20.0, 641};
    const auto model = ou_model(0.5, 0.9, 1.1, 2, 1.3);
    const auto P = GridFunction<double>::sample(g, [](double x) { return gauss(x, 0.0, 1.0); });
    const auto Q = GridFunction<double>::sample(g, [](double x) { return gauss(x, 1.5, 0.7); });
    GridFunction<double> R{g, 2.0 * P.values - 3.0 * Q.values};
    for (int form = 0; form < 2; ++form) {
      auto gen = [&](const GridFunction<double>& f) {
        return form == 0 ? integral_generator(f, model).values : differential_generator(f, model).values;
      };
      const Eigen::VectorXd lhs = gen(R), rhs = 2.0 * gen(P) - 3.0 * gen(Q);
      CHECK(max_abs(lhs - rhs) <= 1e-9 * max_abs(lhs));
    }
  }

  TEST_CASE("undecayed densities are rejected") {
    const GridSpec g{-3.0, 3.0, 61};
    const auto model = ou_model(1.0, 1.0, 1.0, 1, 1.0);
    const auto P = GridFunction<double>::sample(g, [](double x) { return gauss(x, 0.0, 1.0); });
    CHECK_THROWS_AS(integral_generator(P, model), BoundaryError);
    CHECK_THROWS_AS(differential_generator(P, model), BoundaryError);
    CHECK_NOTHROW(integral_generator(P, model, GeneratorOptions{false, 0.0}));
  }

  TEST_CASE("m = 1 differential form against the analytic expression") {
    // (∂+γ)T - λP' with T = ∂x(αxP) + ½σ²P'' for a Gaussian P
    const double alpha = 0.8, sigma = 0.6, lambda = 1.4, gamma = 1.2, mu = 0.5, s = 1.1;
    const auto model = ou_model(alpha, sigma, lambda, 1, gamma);
    std::vector<double> hs, errs;
    for (int n : {201, 401, 801}) {
      const GridSpec g{-12.0, 12.0, n};
      const auto P = GridFunction<double>::sample(g, [&](double x) { return gauss(x, mu, s); });
      const auto D = differential_generator(P, model);
      double worst = 0.0;
      for (int i = 0; i < D.spec.n; ++i) {
        const double x = D.x(i);
        const auto j = gauss_jet(x, mu, s);
        const double T = alpha * j.p + alpha * x * j.p1 + 0.5 * sigma * sigma * j.p2;
        const double dT = 2.0 * alpha * j.p1 + alpha * x * j.p2 + 0.5 * sigma * sigma * j.p3;
        worst = std::max(worst, std::abs(D.values[i] - (dT + gamma * T - lambda * j.p1)));
      }
      hs.push_back(g.h());
      errs.push_back(worst);
    }
    CHECK(errs.back() < 1e-6);
    CHECK(fit_order(hs, errs).order > 3.5);
  }

  TEST_CASE("m = 1 zero drift reduces to -(λP)'") {
    ModelSpec model;
    model.rate = ConstantRate{2.0};
    model.jumps = ErlangJumpLaw{1, 1.0};
    const GridSpec g{-10.0, 10.0, 801};
    const auto P = GridFunction<double>::sample(g, [](double x) { return gauss(x, 0.0, 1.0); });
    const auto D = differential_generator(P, model);
    double worst = 0.0;
    for (int i = 0; i < D.spec.n; ++i) worst = std::max(worst, std::abs(D.values[i] + 2.0 * gauss_jet(D.x(i), 0.0, 1.0).p1));
    CHECK(worst < 1e-7);
  }

  TEST_CASE("integral generator conserves mass") {
    const auto model = ou_model(0.6, 0.8, 1.3, 2, 1.5);
    std::vector<double> hs, defects;
    for (int n : {513, 1025, 2049}) {
      const GridSpec g{-20.0, 40.0, n};
      const auto P = GridFunction<double>::sample(g, [](double x) { return 0.6 * gauss(x, 0.0, 1.0) + 0.4 * gauss(x, 2.0, 0.8); });
      hs.push_back(g.h());
      defects.push_back(std::abs(grid_mass(integral_generator(P, model))));
    }
    CHECK(defects.back() < 1e-3);
    CHECK(fit_order(hs, defects).order > kOrderThreshold);
  }

  TEST_CASE("kernel of the shift operator") {
    const double gamma = 1.3;
    for (int m = 1; m <= 3; ++m) {
      std::vector<double> hs, errs;
      for (int n : {201, 401, 801}) {
        const GridSpec g{0.0, 6.0, n};
        // e^{-γx} times a polynomial of degree m - 1
        const auto f = GridFunction<double>::sample(g, [&](double x) {
          double q = 0.0, xp = 1.0;
          for (int k = 0; k < m; ++k, xp *= x) q += (k + 1) * xp;
          return std::exp(-gamma * x) * q;
        });
        const auto r = apply_shift_power(f, gamma, m);
        CHECK(r.spec.n == n - 4 * m);
        hs.push_back(g.h());
        errs.push_back(max_abs(r.values) / max_abs(f.values));
      }
      CHECK(errs.back() < 1e-6);
      CHECK(fit_order(hs, errs).order > 3.5);
    }
    // and a function outside the kernel is not annihilated
    const GridSpec g{0.0, 6.0, 401};
    const auto f = GridFunction<double>::sample(g, [&](double x) { return std::exp(-gamma * x) * x; });
    CHECK(max_abs(apply_shift_power(f, gamma, 1).values) > 0.1);
  }

  TEST_CASE("certificate: both forms agree for m = 1..4") {
    const CertificateConfig cfg;
    for (int m = 1; m <= 4; ++m) {
      const auto r = generator_certificate(m, cfg);
      CAPTURE(m);
      CAPTURE(r.order);
      CAPTURE(r.mass_order);
      CHECK(r.passed);
      CHECK(r.order >= kOrderThreshold);
      CHECK(r.mass_order >= kOrderThreshold);
      CHECK(r.levels.size() == cfg.levels.size());
      for (std::size_t i = 1; i < r.levels.size(); ++i) CHECK(r.levels[i].max_diff < r.levels[i - 1].max_diff);
    }
    CertificateConfig two = cfg;
    two.levels = {513, 1025};
    CHECK_THROWS_AS(generator_certificate(1, two), InsufficientDataError);
  }

  TEST_CASE("stationary residual vanishes on the exact densities") {
    // ρ = λ/α = 8 keeps the x^{ρ-1} onset smooth enough for the stencils
    const double alpha = 1.0, lambda = 8.0, gamma = 1.0;
    for (int m = 1; m <= 2; ++m) {
      const auto model = ou_model(alpha, 0.0, lambda, m, gamma);
      std::vector<double> hs, exact, perturbed;
      for (int n : {1025, 2049, 4097}) {
        const GridSpec g{-4.0, 100.0, n};
        const auto P = m == 1 ? stationary_m1([&](double x) { return alpha * x; }, [&](double) { return lambda; },
                                              gamma, g, Interval{0.0, INFINITY})
                              : GridFunction<double>::sample(
                                    g, [&](double x) { return x <= 0.0 ? 0.0 : stationary_ou_m2(alpha, lambda, gamma, x); });
        GridFunction<double> Q = P;
        for (int i = 0; i < g.n; ++i) Q.values[i] *= 1.0 + 0.1 * std::sin(g.x(i));
        hs.push_back(g.h());
        exact.push_back(stationary_residual(P, model));
        perturbed.push_back(stationary_residual(Q, model));
      }
      CAPTURE(m);
      CHECK(exact.back() < 1e-6);
      CHECK(fit_order(hs, exact).order >= 2.0);
      // negative control: stays O(1)
      CHECK(perturbed.back() > 1e-3);
      CHECK(perturbed.back() > 0.5 * perturbed.front());
    }
  }

  TEST_CASE("stationary residual window") {
    const auto model = ou_model(1.0, 0.0, 8.0, 1, 1.0);
    const GridSpec g{-4.0, 70.0, 1025};
    const auto P = stationary_m1([](double x) { return x; }, [](double) { return 8.0; }, 1.0, g, Interval{0.0, INFINITY});
    ResidualOptions opt;
    opt.window_lo = 0.0;
    opt.window_hi = 0.01;
    CHECK_THROWS_AS(stationary_residual(P, model, opt), BoundaryError);
    opt.window_hi = 70.0;
    CHECK(stationary_residual(P, model, opt) <= stationary_residual(P, model));
  }

  TEST_CASE("wave residual: exact profiles and the wrong speed") {
    for (int m = 1; m <= 2; ++m) {
      const auto sol = m == 1 ? gumbel_wave(1.0, 1.0) : whittaker_wave(1.0, 1.0);
      std::vector<double> hs, errs, wrong;
      for (int n : {1025, 2049, 4097}) {
        const GridSpec g{-5.0, 45.0, n};
        const auto P = GridFunction<double>::sample(g, [&](double x) { return sol.profile(x); });
        hs.push_back(g.h());
        errs.push_back(wave_residual(P, 1.0, 1.0, m, sol.speed));
        wrong.push_back(wave_residual(P, 1.0, 1.0, m, 2.0 * sol.speed));
      }
      CAPTURE(m);
      CHECK(errs.back() < 1e-6);
      CHECK(fit_order(hs, errs).order >= 2.0);
      CHECK(wrong.back() > 1e-2);
    }
    const auto P = GridFunction<double>::sample(GridSpec{-5.0, 45.0, 101}, [](double) { return 0.0; });
    CHECK_THROWS_AS(wave_residual(P, 1.0, 1.0, 3, 1.0), DomainError);
  }

  TEST_CASE("restriction to nested grids") {
    const GridSpec g{0.0, 1.0, 11};
    const auto f = GridFunction<double>::sample(g, [](double x) { return x; });
    const auto r = restrict_to(f, g.trimmed(2));
    CHECK(r.values[0] == doctest::Approx(0.2));
    CHECK_THROWS_AS(restrict_to(f, GridSpec{0.05, 0.5, 9}), BoundaryError);
  }

  TEST_CASE("order fit") {
    std::vector<double> h{0.4, 0.2, 0.1, 0.05}, e;
    for (double x : h) e.push_back(3.0 * x * x);
    const auto fit = fit_order(h, e);
    CHECK(fit.order == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::exp(fit.log_constant) == doctest::Approx(3.0).epsilon(1e-10));
    CHECK_THROWS_AS(fit_order({0.1, 0.05}, {1.0, 0.5}), InsufficientDataError);
    CHECK_THROWS_AS(fit_order({0.1, 0.05, 0.01}, {1.0, 0.0, 0.1}), DomainError);
  }
}
