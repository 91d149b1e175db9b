#include <cmath>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "shotnoise/errors.hpp"
#include "shotnoise/quadrature.hpp"

using namespace shotnoise;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_SUITE("quadrature") {
  TEST_CASE("finite interval polynomial and oscillatory") {
    CHECK(std::abs(quad([](double x) { return x * x * x; }, 0.0, 2.0) - 4.0) < 1e-13);
    CHECK(std::abs(quad([](double x) { return std::sin(x); }, 0.0, std::numbers::pi) - 2.0) < 1e-12);
    // many periods forces bisection
    CHECK(std::abs(quad([](double x) { return std::cos(40.0 * x); }, 0.0, 3.0) - std::sin(120.0) / 40.0) < 1e-11);
  }

  TEST_CASE("reversed limits flip the sign") {
    const double fwd = quad([](double x) { return std::exp(x); }, 0.0, 1.0);
    const double rev = quad([](double x) { return std::exp(x); }, 1.0, 0.0);
    CHECK(std::abs(fwd - (std::numbers::e - 1.0)) < 1e-13);
    CHECK(std::abs(rev + fwd) < 1e-15);
  }

  TEST_CASE("infinite ranges") {
    const double g = quad([](double x) { return std::exp(-x * x); }, -kInf, kInf);
    CHECK(std::abs(g - std::sqrt(std::numbers::pi)) < 1e-12);
    CHECK(std::abs(quad([](double x) { return std::exp(-2.0 * x); }, 0.0, kInf) - 0.5) < 1e-12);
    CHECK(std::abs(quad([](double x) { return 1.0 / (1.0 + x * x); }, -kInf, 0.0) - std::numbers::pi / 2) < 1e-11);
  }

  TEST_CASE("absolute tolerance stops work on negligible integrands") {
    QuadOptions opt;
    opt.abs_tol = 1e-12;
    opt.rel_tol = 0.0;
    const auto r = integrate([](double x) { return 1e-30 * std::sin(1e3 * x); }, 0.0, 1.0, opt);
    CHECK(std::abs(r.value) < 1e-28);
    CHECK(r.error <= 1e-12);
  }

  TEST_CASE("l1 estimate is reported") {
    // Kronrod estimate of ∫|sin|; the kink at π keeps it approximate
    const auto r = integrate([](double x) { return std::sin(x); }, 0.0, 2.0 * std::numbers::pi);
    CHECK(std::abs(r.value) < 1e-12);
    CHECK(std::abs(r.l1 - 4.0) < 0.1);
    const auto p = integrate([](double x) { return x * x; }, -1.0, 1.0);
    CHECK(std::abs(p.l1 - 2.0 / 3.0) < 1e-3);
  }

  TEST_CASE("divergent and non-finite integrands throw") {
    CHECK_THROWS_AS(quad([](double x) { return 1.0 / x; }, 0.0, 1.0), ConvergenceError);
    CHECK_THROWS_AS(quad([](double) { return std::numeric_limits<double>::quiet_NaN(); }, 0.0, 1.0),
                    ConvergenceError);
  }

  TEST_CASE("tanh-sinh handles endpoint singularities") {
    CHECK(std::abs(quad_singular_ends([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0) - 2.0) < 1e-9);
    CHECK(std::abs(quad_singular_ends([](double x) { return std::log(x); }, 0.0, 1.0) + 1.0) < 1e-9);
    // logarithmic singularity at both ends
    const double v = quad_singular_ends([](double x) { return -std::log(x * (1.0 - x)); }, 0.0, 1.0);
    CHECK(std::abs(v - 2.0) < 1e-9);
  }
}
