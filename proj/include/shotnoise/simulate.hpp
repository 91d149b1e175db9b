#pragma once

// Monte Carlo engine: Euler–Maruyama paths with compound Poisson jumps, the
// barycenter-coupled swarm, and the estimators used to compare them with the
// closed forms.

#include <Eigen/Core>
#include <algorithm>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

#include "shotnoise/master.hpp"

namespace shotnoise {

struct SimConfig {
  double dt = 1e-2;
  double t_end = 1.0;
  int n_paths = 1;
  std::uint64_t seed = 0;
  int record_stride = 1;
  int workers = 1;
  double x0 = 0.0;

  void validate() const;
  /// Number of steps; the last one is shortened to land on t_end.
  long n_steps() const;
};

struct TrajectoryBatch {
  std::vector<double> times;
  Eigen::MatrixXd paths;  // n_paths × times.size()
  std::vector<std::uint64_t> jump_counts;

  std::vector<double> final_positions() const;
};

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Per-path time average over recorded times >= t_from, then mean and
/// standard error across (independent) paths.
MeanEstimate tail_time_average(const TrajectoryBatch& batch, double t_from);

/// Mean and standard error of i.i.d. values.
MeanEstimate sample_mean(const std::vector<double>& values);

/// Path i draws from stream (seed, i): lane 1 for jump arrivals and sizes,
/// lane 2 for the Brownian increments. Per step the order is drift,
/// diffusion, then the jumps that arrived during the step. Requires a
/// constant rate.
TrajectoryBatch simulate_paths(const ModelSpec& model, const SimConfig& config);

/// dX = β tanh(βX) dt + dW + Laplace(γ) jumps at rate λ.
TrajectoryBatch simulate_tanh(double lambda, double gamma, double beta, const SimConfig& config);

/// dY = -αY dt + dX with dX the tanh-drift increments above (same step).
TrajectoryBatch simulate_ou_tanh(double alpha, double lambda, double gamma, double beta, const SimConfig& config);

struct SwarmSeries {
  std::vector<double> times;
  std::vector<double> barycenter;
  std::vector<Eigen::VectorXd> snapshots;
  int n_agents = 0;
  int m = 1;
  double gamma = 1.0;
  double beta = 1.0;
  long halvings = 0;  // steps redone at half size after a failed majorant check
};

struct SwarmOptions {
  double velocity_smoothing = 0.05;  // EMA weight of the per-step barycenter velocity
  int max_halving_depth = 16;
};

/// Pure-jump agents with rate e^{-β(x_i - X̄)} and Erlang(m, γ) jumps,
/// simulated by per-step thinning. Agent i uses stream (seed, i).
SwarmSeries simulate_swarm(int n_agents, int m, double gamma, double beta, const SimConfig& config,
                           const SwarmOptions& options = {});

/// Least-squares slope over the trailing `window_fraction` of the time span.
double estimate_speed(const SwarmSeries& series, double window_fraction = 0.5);
double estimate_slope(const std::vector<double>& t, const std::vector<double>& y, double window_fraction = 0.5);

/// Positions minus the barycenter, pooled over snapshots in the trailing window.
std::vector<double> centered_positions(const SwarmSeries& series, double window_fraction = 0.5);

struct EmpiricalDensity {
  std::vector<double> bin_edges;
  std::vector<double> masses;
  long n_samples = 0;
};

/// Equal-width histogram on [min, max]; needs two distinct values.
EmpiricalDensity empirical_density(const std::vector<double>& samples, int n_bins);

/// sup |F_n - F|. When `cdf_left` is given, tied samples are compared against
/// the left limit too, which is exact for laws with atoms.
double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf,
                   const std::function<double(double)>& cdf_left = {});

/// Two-sample Kolmogorov–Smirnov statistic.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Runs fn(begin, end) over a static contiguous partition of [0, n).
void parallel_for(long n, int workers, const std::function<void(long, long)>& fn);

}  // namespace shotnoise
