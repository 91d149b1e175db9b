#include "shotnoise/simulate.hpp"

#include <cmath>
#include <exception>
#include <mutex>

#include "shotnoise/noise.hpp"

namespace shotnoise {

void SimConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("SimConfig: dt must be positive");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw DomainError("SimConfig: t_end must be positive");
  if (!(dt <= t_end)) throw DomainError("SimConfig: requires dt <= t_end");
  if (n_paths < 1) throw DomainError("SimConfig: n_paths must be >= 1");
  if (record_stride < 1) throw DomainError("SimConfig: record_stride must be >= 1");
  if (workers < 1) throw DomainError("SimConfig: workers must be >= 1");
  if (!std::isfinite(x0)) throw DomainError("SimConfig: x0 must be finite");
}

long SimConfig::n_steps() const { return static_cast<long>(std::ceil(t_end / dt - 1e-9)); }

std::vector<double> TrajectoryBatch::final_positions() const {
  std::vector<double> out(static_cast<std::size_t>(paths.rows()));
  for (Eigen::Index i = 0; i < paths.rows(); ++i) out[i] = paths(i, paths.cols() - 1);
  return out;
}

void parallel_for(long n, int workers, const std::function<void(long, long)>& fn) {
  if (n <= 0) return;
  const long w = std::min<long>(std::max(workers, 1), n);
  if (w == 1) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex guard;
  for (long k = 0; k < w; ++k) {
    const long begin = n * k / w;
    const long end = n * (k + 1) / w;
    pool.emplace_back([&, begin, end] {
      try {
        fn(begin, end);
      } catch (...) {
        std::lock_guard<std::mutex> lock(guard);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

namespace {

struct Schedule {
  long n_steps = 0;
  std::vector<double> times;
  std::vector<char> record;  // record[k] for the state after step k (k = 1..n_steps)
};

Schedule make_schedule(const SimConfig& cfg) {
  Schedule s;
  s.n_steps = cfg.n_steps();
  s.record.assign(static_cast<std::size_t>(s.n_steps + 1), 0);
  s.times.push_back(0.0);
  for (long k = 1; k <= s.n_steps; ++k) {
    if (k % cfg.record_stride == 0 || k == s.n_steps) {
      s.record[k] = 1;
      s.times.push_back(k == s.n_steps ? cfg.t_end : k * cfg.dt);
    }
  }
  return s;
}

double step_end(const SimConfig& cfg, const Schedule& s, long k) {
  return k + 1 == s.n_steps ? cfg.t_end : (k + 1) * cfg.dt;
}

// Shared driver: `path(i, row)` simulates path i and writes its recorded
// states through row(column, value); returns the jump count.
template <class PathFn>
TrajectoryBatch run_batch(const SimConfig& cfg, PathFn&& path) {
  cfg.validate();
  const Schedule sched = make_schedule(cfg);
  TrajectoryBatch batch;
  batch.times = sched.times;
  batch.paths.resize(cfg.n_paths, static_cast<Eigen::Index>(sched.times.size()));
  batch.jump_counts.assign(static_cast<std::size_t>(cfg.n_paths), 0);
  parallel_for(cfg.n_paths, cfg.workers, [&](long begin, long end) {
    for (long i = begin; i < end; ++i) batch.jump_counts[i] = path(i, sched, batch.paths.row(i));
  });
  return batch;
}

}  // namespace

TrajectoryBatch simulate_paths(const ModelSpec& model, const SimConfig& config) {
  model.validate();
  const auto* rate = std::get_if<ConstantRate>(&model.rate);
  if (!rate) throw DomainError("simulate_paths: requires a constant rate (state-dependent rates are swarm-only)");
  const double lambda = rate->lambda;
  const double sigma = sigma_of(model.diffusion);
  const ErlangJumpLaw law = model.jumps;
  return run_batch(config, [&](long i, const Schedule& s, auto row) {
    RngStream base(config.seed, static_cast<std::uint64_t>(i));
    RngStream diffusion = base.lane(2);
    auto sampler = [law](RngStream& r) { return erlang_sample(law, r); };
    ArrivalClock<decltype(sampler)> clock(lambda, sampler, base.lane(1));
    double x = config.x0;
    std::uint64_t jumps = 0;
    Eigen::Index col = 0;
    row(col++) = x;
    for (long k = 0; k < s.n_steps; ++k) {
      const double t1 = step_end(config, s, k);
      const double h = t1 - k * config.dt;
      x += drift_at(model.drift, x) * h;
      if (sigma != 0.0) x += sigma * std::sqrt(h) * diffusion.normal();
      const JumpIncrement j = clock.advance_to(t1);
      x += j.value;
      jumps += j.jumps;
      if (s.record[k + 1]) row(col++) = x;
    }
    return jumps;
  });
}

namespace {

template <class Observe>
TrajectoryBatch tanh_driver(double lambda, double gamma, double beta, const SimConfig& config, Observe observe) {
  if (!(lambda >= 0.0) || !(gamma > 0.0) || !(beta >= 0.0))
    throw DomainError("tanh simulation: requires lambda >= 0, gamma > 0, beta >= 0");
  const SymmetricLaplaceLaw law{gamma};
  return run_batch(config, [&](long i, const Schedule& s, auto row) {
    RngStream base(config.seed, static_cast<std::uint64_t>(i));
    RngStream diffusion = base.lane(2);
    auto sampler = [law](RngStream& r) { return laplace_sample(law, r); };
    ArrivalClock<decltype(sampler)> clock(lambda, sampler, base.lane(1));
    auto state = observe.start(config);
    double x = 0.0;
    std::uint64_t jumps = 0;
    Eigen::Index col = 0;
    row(col++) = observe.value(state, x);
    for (long k = 0; k < s.n_steps; ++k) {
      const double t1 = step_end(config, s, k);
      const double h = t1 - k * config.dt;
      double dx = beta * std::tanh(beta * x) * h;
      dx += std::sqrt(h) * diffusion.normal();
      const JumpIncrement j = clock.advance_to(t1);
      dx += j.value;
      jumps += j.jumps;
      observe.update(state, x, dx, h);
      x += dx;
      if (s.record[k + 1]) row(col++) = observe.value(state, x);
    }
    return jumps;
  });
}

struct ObserveX {
  double start(const SimConfig& c) const { return c.x0; }
  void update(double&, double, double, double) const {}
  double value(double state, double x) const { return state + x; }
};

struct ObserveOu {
  double alpha;
  double start(const SimConfig& c) const { return c.x0; }
  void update(double& y, double, double dx, double h) const { y += -alpha * y * h + dx; }
  double value(double y, double) const { return y; }
};

}  // namespace

TrajectoryBatch simulate_tanh(double lambda, double gamma, double beta, const SimConfig& config) {
  if (config.x0 != 0.0) throw DomainError("simulate_tanh: the tanh model starts at x0 = 0");
  return tanh_driver(lambda, gamma, beta, config, ObserveX{});
}

TrajectoryBatch simulate_ou_tanh(double alpha, double lambda, double gamma, double beta, const SimConfig& config) {
  if (!(alpha > 0.0)) throw DomainError("simulate_ou_tanh: alpha must be positive");
  return tanh_driver(lambda, gamma, beta, config, ObserveOu{alpha});
}

MeanEstimate sample_mean(const std::vector<double>& values) {
  if (values.size() < 2) throw InsufficientDataError("sample_mean: needs at least two values");
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1) / n)};
}

MeanEstimate tail_time_average(const TrajectoryBatch& batch, double t_from) {
  std::vector<Eigen::Index> cols;
  for (std::size_t k = 0; k < batch.times.size(); ++k)
    if (batch.times[k] >= t_from) cols.push_back(static_cast<Eigen::Index>(k));
  if (cols.empty()) throw InsufficientDataError("tail_time_average: no recorded time in the tail");
  std::vector<double> per_path(static_cast<std::size_t>(batch.paths.rows()));
  for (Eigen::Index i = 0; i < batch.paths.rows(); ++i) {
    double s = 0.0;
    for (Eigen::Index c : cols) s += batch.paths(i, c);
    per_path[i] = s / static_cast<double>(cols.size());
  }
  return sample_mean(per_path);
}

// ---------------------------------------------------------------- swarm

namespace {

double ordered_mean(const Eigen::VectorXd& x) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += x[i];
  return s / static_cast<double>(x.size());
}

struct SwarmState {
  Eigen::VectorXd x;
  std::vector<RngStream> rng;
  double velocity = 0.0;
  long halvings = 0;
};

// One step of length h. Each agent's candidate events come from a
// homogeneous majorant e^{-β(ξ_i - Ĉh)}; the barycenter inside the step is
// extrapolated at the current velocity, which the majorant covers as long
// as the barycenter moves by at most Ĉh. A step that violates this is
// rolled back and redone as two half steps with a larger Ĉ.
void swarm_step(SwarmState& st, double h, double c_floor, int depth, const ErlangJumpLaw& law, double beta,
                const SimConfig& cfg, const SwarmOptions& opt) {
  const double start_bar = ordered_mean(st.x);
  const double v = st.velocity;
  const double c_hat = std::max({2.0 * v, 1.0 / beta, c_floor});
  const Eigen::VectorXd saved_x = st.x;
  const std::vector<RngStream> saved_rng = st.rng;

  parallel_for(st.x.size(), cfg.workers, [&](long begin, long end) {
    for (long i = begin; i < end; ++i) {
      RngStream& r = st.rng[i];
      double& xi = st.x[i];
      const double bound = std::exp(-beta * (xi - start_bar - c_hat * h));
      for (double s = r.exponential(bound); s < h; s += r.exponential(bound)) {
        const double rate = std::exp(-beta * (xi - start_bar - v * s));
        if (r.uniform() * bound <= rate) xi += erlang_sample(law, r);
      }
    }
  });

  const double moved = ordered_mean(st.x) - start_bar;
  if (moved > c_hat * h) {
    if (depth >= opt.max_halving_depth)
      throw ThinningError("simulate_swarm: majorant still exceeded after repeated step halving");
    st.x = saved_x;
    st.rng = saved_rng;
    ++st.halvings;
    const double floor = 2.0 * moved / h;
    swarm_step(st, 0.5 * h, floor, depth + 1, law, beta, cfg, opt);
    swarm_step(st, 0.5 * h, floor, depth + 1, law, beta, cfg, opt);
    return;
  }
  st.velocity = (1.0 - opt.velocity_smoothing) * v + opt.velocity_smoothing * moved / h;
}

}  // namespace

SwarmSeries simulate_swarm(int n_agents, int m, double gamma, double beta, const SimConfig& config,
                           const SwarmOptions& options) {
  config.validate();
  if (n_agents < 1) throw DomainError("simulate_swarm: n_agents must be >= 1");
  if (m != 1 && m != 2) throw DomainError("simulate_swarm: m must be 1 or 2");
  if (!(gamma > 0.0) || !(beta > 0.0)) throw DomainError("simulate_swarm: gamma and beta must be positive");
  const ErlangJumpLaw law{m, gamma};
  const Schedule sched = make_schedule(config);

  SwarmState st;
  st.x = Eigen::VectorXd::Constant(n_agents, config.x0);
  st.rng.reserve(static_cast<std::size_t>(n_agents));
  for (int i = 0; i < n_agents; ++i) st.rng.emplace_back(config.seed, static_cast<std::uint64_t>(i));

  SwarmSeries out;
  out.n_agents = n_agents;
  out.m = m;
  out.gamma = gamma;
  out.beta = beta;
  auto record = [&](double t) {
    out.times.push_back(t);
    out.snapshots.push_back(st.x);
    out.barycenter.push_back(ordered_mean(st.x));
  };
  record(0.0);
  for (long k = 0; k < sched.n_steps; ++k) {
    const double t1 = step_end(config, sched, k);
    swarm_step(st, t1 - k * config.dt, 0.0, 0, law, beta, config, options);
    if (sched.record[k + 1]) record(t1);
  }
  out.halvings = st.halvings;
  return out;
}

double estimate_slope(const std::vector<double>& t, const std::vector<double>& y, double window_fraction) {
  if (t.size() != y.size()) throw DomainError("estimate_slope: size mismatch");
  if (!(window_fraction > 0.0 && window_fraction <= 1.0)) throw DomainError("estimate_slope: window in (0, 1]");
  if (t.empty()) throw InsufficientDataError("estimate_slope: no data");
  const double from = t.back() - window_fraction * (t.back() - t.front());
  double n = 0, st = 0, sy = 0;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] >= from) {
      n += 1;
      st += t[i];
      sy += y[i];
    }
  if (n < 10) throw InsufficientDataError("estimate_slope: fewer than 10 points in the window");
  const double tm = st / n, ym = sy / n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] >= from) {
      sxy += (t[i] - tm) * (y[i] - ym);
      sxx += (t[i] - tm) * (t[i] - tm);
    }
  return sxy / sxx;
}

double estimate_speed(const SwarmSeries& series, double window_fraction) {
  return estimate_slope(series.times, series.barycenter, window_fraction);
}

std::vector<double> centered_positions(const SwarmSeries& series, double window_fraction) {
  if (series.times.empty()) throw InsufficientDataError("centered_positions: empty series");
  const double from = series.times.back() - window_fraction * (series.times.back() - series.times.front());
  std::vector<double> out;
  for (std::size_t k = 0; k < series.times.size(); ++k) {
    if (series.times[k] < from) continue;
    for (Eigen::Index i = 0; i < series.snapshots[k].size(); ++i)
      out.push_back(series.snapshots[k][i] - series.barycenter[k]);
  }
  return out;
}

EmpiricalDensity empirical_density(const std::vector<double>& samples, int n_bins) {
  if (n_bins < 1) throw DomainError("empirical_density: n_bins must be >= 1");
  if (samples.empty()) throw InsufficientDataError("empirical_density: no samples");
  const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
  const double lo = *lo_it, hi = *hi_it;
  if (!(hi > lo)) throw InsufficientDataError("empirical_density: needs at least two distinct samples");
  EmpiricalDensity d;
  d.n_samples = static_cast<long>(samples.size());
  d.bin_edges.resize(static_cast<std::size_t>(n_bins) + 1);
  for (int b = 0; b <= n_bins; ++b) d.bin_edges[b] = lo + (hi - lo) * b / n_bins;
  std::vector<long> counts(static_cast<std::size_t>(n_bins), 0);
  for (double v : samples) {
    long b = static_cast<long>((v - lo) / (hi - lo) * n_bins);
    counts[std::clamp<long>(b, 0, n_bins - 1)] += 1;
  }
  d.masses.resize(counts.size());
  for (std::size_t b = 0; b < counts.size(); ++b) d.masses[b] = static_cast<double>(counts[b]) / d.n_samples;
  return d;
}

double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf,
                   const std::function<double(double)>& cdf_left) {
  if (samples.empty()) throw InsufficientDataError("ks_distance: no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < samples.size()) {
    std::size_t j = i;
    while (j < samples.size() && samples[j] == samples[i]) ++j;
    const double v = samples[i];
    const double c = cdf(v);
    const double cl = cdf_left ? cdf_left(v) : c;
    d = std::max({d, std::abs(static_cast<double>(j) / n - c), std::abs(cl - static_cast<double>(i) / n)});
    i = j;
  }
  return std::min(d, 1.0);
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw InsufficientDataError("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() || j < b.size()) {
    double v;
    if (j == b.size() || (i < a.size() && a[i] <= b[j]))
      v = a[i];
    else
      v = b[j];
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  return d;
}

}  // namespace shotnoise
