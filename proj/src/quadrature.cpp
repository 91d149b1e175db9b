#include "shotnoise/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <cstdio>
#include <limits>
#include <queue>
#include <string>

#include "shotnoise/errors.hpp"

namespace shotnoise {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 15>;

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

struct Panel {
  double a, b, value, error, l1;
  unsigned depth;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel panel(const std::function<double(double)>& g, double a, double b, unsigned depth) {
  Panel p{a, b, 0.0, 0.0, 0.0, depth};
  p.value = GK::integrate(g, a, b, 0, 0.0, &p.error, &p.l1);
  // Boost 1.74 returns the unrefined error estimate on [-1, 1] without the
  // half-width factor it applies to the value and l1.
  p.error *= 0.5 * (b - a);
  return p;
}

QuadResult adaptive(const std::function<double(double)>& g, double a, double b, const QuadOptions& opt) {
  constexpr std::size_t kMaxPanels = 20000;
  std::priority_queue<Panel> heap;
  heap.push(panel(g, a, b, 0));
  QuadResult r{heap.top().value, heap.top().error, heap.top().l1};
  while (!(r.error <= std::max(opt.abs_tol, opt.rel_tol * r.l1)) && std::isfinite(r.value)) {
    Panel worst = heap.top();
    if (worst.depth >= opt.max_depth || heap.size() >= kMaxPanels) break;
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Panel left = panel(g, worst.a, mid, worst.depth + 1);
    const Panel right = panel(g, mid, worst.b, worst.depth + 1);
    r.value += left.value + right.value - worst.value;
    r.error += left.error + right.error - worst.error;
    r.l1 += left.l1 + right.l1 - worst.l1;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to shed the cancellation accumulated by the running updates.
  r = {};
  while (!heap.empty()) {
    r.value += heap.top().value;
    r.error += heap.top().error;
    r.l1 += heap.top().l1;
    heap.pop();
  }
  return r;
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b, const QuadOptions& opt) {
  if (a == b) return {};
  if (a > b) {
    QuadResult r = integrate(f, b, a, opt);
    r.value = -r.value;
    return r;
  }
  QuadResult r;
  const bool lo_inf = std::isinf(a), hi_inf = std::isinf(b);
  if (lo_inf && hi_inf) {
    const QuadResult l = integrate(f, a, 0.0, opt), h = integrate(f, 0.0, b, opt);
    return {l.value + h.value, l.error + h.error, l.l1 + h.l1};
  } else if (hi_inf) {
    // x = a + s/(1-s), s in [0, 1)
    r = adaptive(
        [&](double s) {
          const double d = 1.0 - s;
          return d > 0.0 ? f(a + s / d) / (d * d) : 0.0;
        },
        0.0, 1.0, opt);
  } else if (lo_inf) {
    r = adaptive(
        [&](double s) {
          const double d = 1.0 - s;
          return d > 0.0 ? f(b - s / d) / (d * d) : 0.0;
        },
        0.0, 1.0, opt);
  } else {
    r = adaptive(f, a, b, opt);
  }
  const double budget = std::max(opt.abs_tol, opt.rel_tol * r.l1);
  if (!std::isfinite(r.value) || !(r.error <= budget))
    throw ConvergenceError("integrate: error estimate " + sci(r.error) + " exceeds tolerance " + sci(budget) +
                           " on [" + sci(a) + ", " + sci(b) + "]");
  return r;
}

double quad(const std::function<double(double)>& f, double a, double b, const QuadOptions& opt) {
  return integrate(f, a, b, opt).value;
}

double quad_singular_ends(const std::function<double(double)>& f, double a, double b, double rel_tol) {
  if (a == b) return 0.0;
  if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("quad_singular_ends: requires a finite interval");
  boost::math::quadrature::tanh_sinh<double> ts;
  double err = 0.0, l1 = 0.0;
  double v;
  try {
    v = ts.integrate(f, a, b, rel_tol, &err, &l1);
  } catch (const std::exception& e) {
    throw ConvergenceError(std::string("quad_singular_ends: ") + e.what());
  }
  if (!std::isfinite(v) || err > std::max(1e3 * rel_tol * l1, 1e-14))
    throw ConvergenceError("quad_singular_ends: error estimate " + sci(err) + " too large");
  return v;
}

}  // namespace shotnoise
