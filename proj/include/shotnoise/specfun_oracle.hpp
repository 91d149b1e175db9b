#pragma once

// Cross-checks every special function against an independent reference
// (Boost.Math in long double, or long double quadrature of an integral
// representation) on randomly sampled arguments.

#include <cstdint>
#include <string>
#include <vector>

namespace shotnoise {

struct OracleReport {
  std::string function;
  int samples = 0;
  double max_error = 0.0;  // in the units of `criterion`
  double tolerance = 0.0;
  std::string criterion;   // "abs", "rel" or "scaled"
  double worst_input[3] = {0.0, 0.0, 0.0};
  bool passed = false;
};

/// One report per specfun operation, `samples` arguments each.
std::vector<OracleReport> verify_specfun(std::uint64_t seed, int samples = 200);

}  // namespace shotnoise
