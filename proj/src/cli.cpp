#include "shotnoise/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <limits>
#include <map>
#include <sstream>

#include "shotnoise/closedform.hpp"
#include "shotnoise/csv.hpp"
#include "shotnoise/errors.hpp"
#include "shotnoise/master.hpp"
#include "shotnoise/quadrature.hpp"
#include "shotnoise/simulate.hpp"
#include "shotnoise/specfun.hpp"
#include "shotnoise/specfun_oracle.hpp"

namespace shotnoise {

namespace {

using json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;
constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- config

bool same_kind(const json& want, const json& got) {
  if (want.is_null()) return got.is_null() || got.is_number();
  if (want.is_number()) return got.is_number();
  if (want.is_boolean()) return got.is_boolean();
  if (want.is_string()) return got.is_string();
  if (want.is_array()) return got.is_array();
  if (want.is_object()) return got.is_object();
  return false;
}

// Overlays `user` on `defaults`; every user key must exist in the defaults.
void overlay(json& target, const json& user, const std::string& where) {
  for (auto it = user.begin(); it != user.end(); ++it) {
    const std::string path = where.empty() ? it.key() : where + "." + it.key();
    if (!target.contains(it.key())) throw ConfigError("unknown key '" + path + "'");
    json& slot = target[it.key()];
    if (!same_kind(slot, it.value())) throw ConfigError("key '" + path + "' has the wrong type");
    if (slot.is_object())
      overlay(slot, it.value(), path);
    else
      slot = it.value();
  }
}

double num(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(std::string("key '") + key + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(std::string("key '") + key + "' must be finite");
  return d;
}

long long integer_value(const json& v, const std::string& key) {
  if (v.is_number_integer()) return v.get<long long>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 9e15) return static_cast<long long>(d);
  }
  throw ConfigError("key '" + key + "' must be an integer");
}

int integer(const json& j, const char* key) {
  const long long v = integer_value(j.at(key), key);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    throw ConfigError(std::string("key '") + key + "' is out of range");
  return static_cast<int>(v);
}

std::vector<double> num_list(const json& j, const char* key) {
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number() || !std::isfinite(v.get<double>()))
      throw ConfigError(std::string("key '") + key + "' must hold finite numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<int> int_list(const json& j, const char* key) {
  std::vector<int> out;
  for (const auto& v : j.at(key)) out.push_back(static_cast<int>(integer_value(v, key)));
  return out;
}

std::optional<double> optional_num(const json& j, const char* key) {
  if (j.at(key).is_null()) return std::nullopt;
  return num(j, key);
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

std::string tag(double v) {
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s << v;
  return s.str();
}

// ---------------------------------------------------------------- report

struct RunReport {
  std::string command;
  json params;
  json metrics = json::object();
  json flags = json::object();
  double wall_seconds = 0.0;
  std::uint64_t seed = 0;
  std::string error;

  void metric(const std::string& name, double v) { metrics[name] = v; }
  void flag(const std::string& name, bool ok) { flags[name] = ok; }

  bool passed() const {
    if (!error.empty()) return false;
    for (const auto& f : flags) if (!f.get<bool>()) return false;
    return true;
  }

  json to_json() const {
    json j;
    j["command"] = command;
    j["schema_version"] = kSchemaVersion;
    j["seed"] = seed;
    j["parameters"] = params;
    j["metrics"] = metrics;
    j["flags"] = flags;
    j["passed"] = passed();
    j["wall_time_seconds"] = wall_seconds;
    if (!error.empty()) j["error"] = error;
    return j;
  }
};

struct Outputs {
  std::vector<std::pair<std::string, CsvTable>> tables;
  void add(std::string name, CsvTable t) { tables.emplace_back(std::move(name), std::move(t)); }
};

struct Common {
  std::uint64_t seed = 0;
  int workers = 1;
};

using Runner = std::function<void(RunReport&, Outputs&)>;

// A command turns a merged config into a runner; every check that can fail
// for reasons of configuration happens before the runner is returned.
struct Command {
  std::string name;
  std::function<json()> defaults;
  std::function<Runner(const json&, const Common&)> prepare;
};

// ---------------------------------------------------------------- helpers

double simpson(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 3 || n % 2 == 0) throw DomainError("simpson: needs an odd number of at least 3 nodes");
  const double h = (x.back() - x.front()) / static_cast<double>(n - 1);
  double s = y.front() + y.back();
  for (std::size_t i = 1; i + 1 < n; ++i) s += (i % 2 ? 4.0 : 2.0) * y[i];
  return s * h / 3.0;
}

CsvTable histogram_table(const std::vector<double>& samples, int bins, const std::function<double(double)>& cdf) {
  const EmpiricalDensity d = empirical_density(samples, bins);
  CsvTable t;
  t.columns = {"bin_lo", "bin_hi", "mc_mass"};
  t.data.resize(cdf ? 4 : 3);
  if (cdf) t.columns.push_back("analytic_mass");
  for (std::size_t b = 0; b < d.masses.size(); ++b) {
    t.data[0].push_back(d.bin_edges[b]);
    t.data[1].push_back(d.bin_edges[b + 1]);
    t.data[2].push_back(d.masses[b]);
    if (cdf) t.data[3].push_back(cdf(d.bin_edges[b + 1]) - cdf(d.bin_edges[b]));
  }
  return t;
}

SimConfig sim_config(double dt, double t_end, int n_paths, int stride, const Common& c, double x0 = 0.0) {
  SimConfig s;
  s.dt = dt;
  s.t_end = t_end;
  s.n_paths = n_paths;
  s.seed = c.seed;
  s.record_stride = stride;
  s.workers = c.workers;
  s.x0 = x0;
  s.validate();
  return s;
}

int final_only_stride(double dt, double t_end) {
  SimConfig s;
  s.dt = dt;
  s.t_end = t_end;
  const long n = s.n_steps();
  return static_cast<int>(std::min<long>(n, std::numeric_limits<int>::max()));
}

// ---------------------------------------------------------------- wave

json wave_defaults() {
  return json{{"schema_version", kSchemaVersion},
              {"seed", 20240611},
              {"workers", 1},
              {"m", {1, 2}},
              {"beta", {1.0}},
              {"gamma", 1.0},
              {"xi_min", nullptr},
              {"xi_max", nullptr},
              {"points", 4001},
              {"analytic_only", false},
              {"residual_levels", {257, 513, 1025, 2049}},
              {"swarm",
               {{"n_agents", 2000}, {"dt", 0.01}, {"t_end", 40.0}, {"record_stride", 5}, {"window_fraction", 0.5},
                {"bins", 80}}},
              {"tolerances",
               {{"mass", 1e-6}, {"mean", 1e-5}, {"mellin", 1e-5}, {"order", kOrderThreshold}, {"speed_rel", 0.05},
                {"ks", 0.05}}}};
}

WaveSolution make_wave(int m, double beta, double gamma) {
  return m == 1 ? gumbel_wave(beta, gamma) : whittaker_wave(beta, gamma);
}

// Range that holds all but a negligible part of the profile's mass.
std::pair<double, double> wave_range(const WaveSolution& w) {
  return {-std::log(60.0 * w.beta * w.speed) / w.beta - 1.0, 45.0 / w.gamma};
}

Runner prepare_wave(const json& cfg, const Common& common) {
  const std::vector<int> ms = int_list(cfg, "m");
  const std::vector<double> betas = num_list(cfg, "beta");
  const double gamma = num(cfg, "gamma");
  const int points = integer(cfg, "points");
  const auto xi_min = optional_num(cfg, "xi_min");
  const auto xi_max = optional_num(cfg, "xi_max");
  const bool analytic_only = cfg.at("analytic_only").get<bool>();
  const std::vector<int> levels = int_list(cfg, "residual_levels");
  const json& sw = cfg.at("swarm");
  const int n_agents = integer(sw, "n_agents");
  const double dt = num(sw, "dt"), t_end = num(sw, "t_end"), window = num(sw, "window_fraction");
  const int stride = integer(sw, "record_stride"), bins = integer(sw, "bins");
  const json& tol = cfg.at("tolerances");
  const double tol_mass = num(tol, "mass"), tol_mean = num(tol, "mean"), tol_mellin = num(tol, "mellin");
  const double tol_order = num(tol, "order"), tol_speed = num(tol, "speed_rel"), tol_ks = num(tol, "ks");

  require(!ms.empty() && !betas.empty(), "m and beta must be non-empty");
  for (int m : ms) require(m == 1 || m == 2, "m must be 1 or 2");
  for (double b : betas) require(b > 0.0, "beta must be positive");
  require(gamma > 0.0, "gamma must be positive");
  require(points >= 3 && points % 2 == 1, "points must be odd and >= 3");
  require(!xi_min == !xi_max, "xi_min and xi_max must be given together");
  if (xi_min) require(*xi_min < *xi_max, "xi_min must be below xi_max");
  require(levels.size() >= 3, "residual_levels needs at least 3 grids");
  for (int n : levels) require(n >= 9, "residual_levels entries must be >= 9");
  require(window > 0.0 && window <= 1.0, "swarm.window_fraction must be in (0, 1]");
  require(bins >= 1, "swarm.bins must be positive");
  require(n_agents >= 1, "swarm.n_agents must be positive");
  const SimConfig sim = sim_config(dt, t_end, 1, stride, common);

  return [=](RunReport& report, Outputs& out) {
    std::map<int, double> first_speed;
    for (std::size_t bi = 0; bi < betas.size(); ++bi) {
      const double beta = betas[bi];
      const std::string bt = "_beta" + tag(beta);
      for (int m : ms) {
        const WaveSolution w = make_wave(m, beta, gamma);
        const std::string key = "m" + std::to_string(m) + bt;
        auto [lo, hi] = wave_range(w);
        if (xi_min) lo = *xi_min, hi = *xi_max;
        CsvTable t;
        t.columns = {"xi", "density"};
        t.data.resize(2);
        for (int i = 0; i < points; ++i) {
          const double xi = lo + (hi - lo) * i / (points - 1);
          t.data[0].push_back(xi);
          t.data[1].push_back(w.profile(xi));
        }
        std::vector<double> first(t.data[1].size());
        for (std::size_t i = 0; i < first.size(); ++i) first[i] = t.data[0][i] * t.data[1][i];
        const double csv_mass = simpson(t.data[0], t.data[1]);
        const double csv_mean = simpson(t.data[0], first) / csv_mass;
        out.add("profile_" + key + ".csv", std::move(t));

        const ProfileMoments mom = profile_moments(w);
        report.metric("C" + std::to_string(m) + bt, w.speed);
        if (bi == 0) {
          report.metric("C" + std::to_string(m), w.speed);
          first_speed[m] = w.speed;
        }
        report.metric("norm_" + key, w.norm);
        report.metric("csv_mass_" + key, csv_mass);
        report.metric("csv_mean_" + key, csv_mean);
        report.metric("mass_" + key, mom.mass);
        report.metric("mean_" + key, mom.mean);
        report.metric("variance_" + key, mom.variance);
        report.flag("mass_" + key, std::abs(csv_mass - 1.0) <= tol_mass);
        report.flag("mean_" + key, std::abs(csv_mean) <= tol_mean);

        if (m == 2) {
          const double g0 = mellin_moment(w, 0.0);
          const QuadOptions qo{1e-14, 1e-12, 30};
          const double dg0 = -quad([&](double xi) { return xi * w.profile(xi); }, -kInfinity, kInfinity, qo);
          report.metric("mellin_G0" + bt, g0);
          report.metric("mellin_dG0" + bt, dg0);
          report.flag("mellin_G0" + bt, std::abs(g0 - 1.0) <= tol_mellin);
          report.flag("mellin_dG0" + bt, std::abs(dg0) <= tol_mellin);

          const auto [plo, phi] = wave_range(w);
          std::vector<double> hs, errs;
          for (int n : levels) {
            const GridSpec g{plo, std::min(phi, 20.0 / gamma), n};
            const auto psi = GridFunction<double>::sample(g, [&](double xi) { return w.psi(xi); });
            hs.push_back(g.h());
            errs.push_back(schrodinger_residual(psi, beta, gamma, w.speed));
          }
          const OrderFit fit = fit_order(hs, errs);
          report.metric("schrodinger_residual_finest" + bt, errs.back());
          report.metric("schrodinger_order" + bt, fit.order);
          report.flag("schrodinger_order" + bt, fit.order >= tol_order);
        }
      }
    }
    if (first_speed.count(1) && first_speed.count(2)) report.metric("C2_over_C1", first_speed[2] / first_speed[1]);
    if (analytic_only) return;

    const double beta = betas.front();
    std::map<int, double> fitted;
    for (int m : ms) {
      const WaveSolution w = make_wave(m, beta, gamma);
      const std::string k = "_m" + std::to_string(m);
      const SwarmSeries s = simulate_swarm(n_agents, m, gamma, beta, sim);
      const double v = estimate_speed(s, window);
      fitted[m] = v;
      const std::vector<double> centered = centered_positions(s, window);
      const TabulatedCdf cdf = wave_cdf(w);
      const double ks = ks_distance(centered, [&](double x) { return cdf(x); });
      double mean = 0.0, var = 0.0;
      for (double c : centered) mean += c;
      mean /= static_cast<double>(centered.size());
      for (double c : centered) var += (c - mean) * (c - mean);
      var /= static_cast<double>(centered.size());
      const ProfileMoments mom = profile_moments(w);
      report.metric("speed" + k, v);
      report.metric("speed_rel_err" + k, v / w.speed - 1.0);
      report.metric("KS" + k, ks);
      report.metric("centered_variance" + k, var);
      report.metric("variance_rel_err" + k, var / mom.variance - 1.0);
      report.metric("halvings" + k, static_cast<double>(s.halvings));
      report.flag("speed" + k, std::abs(v / w.speed - 1.0) <= tol_speed);
      report.flag("KS" + k, ks < tol_ks);

      CsvTable bary;
      bary.columns = {"t", "barycenter"};
      bary.data = {s.times, s.barycenter};
      out.add("swarm_barycenter" + k + ".csv", std::move(bary));
      out.add("swarm_density" + k + ".csv", histogram_table(centered, bins, [&](double x) { return cdf(x); }));
    }
    if (fitted.count(1) && fitted.count(2)) {
      report.metric("speed_ratio", fitted[2] / fitted[1]);
      report.flag("speed_ratio_above_2", fitted[2] / fitted[1] > 2.0);
    }
  };
}

// ---------------------------------------------------------------- verify-master

json master_defaults() {
  const CertificateConfig c;
  return json{{"schema_version", kSchemaVersion},
              {"seed", c.seed},
              {"workers", 1},
              {"m", {1, 2, 3, 4}},
              {"levels", c.levels},
              {"x_min", c.x_lo},
              {"x_max", c.x_hi},
              {"components", c.components},
              {"densities", c.densities},
              {"alpha", c.alpha},
              {"sigma", c.sigma},
              {"lambda", c.lambda},
              {"gamma", c.gamma},
              {"min_order", kOrderThreshold}};
}

Runner prepare_master(const json& cfg, const Common& common) {
  CertificateConfig c;
  c.levels = int_list(cfg, "levels");
  c.x_lo = num(cfg, "x_min");
  c.x_hi = num(cfg, "x_max");
  c.components = integer(cfg, "components");
  c.densities = integer(cfg, "densities");
  c.alpha = num(cfg, "alpha");
  c.sigma = num(cfg, "sigma");
  c.lambda = num(cfg, "lambda");
  c.gamma = num(cfg, "gamma");
  c.seed = common.seed;
  const double min_order = num(cfg, "min_order");
  const std::vector<int> ms = int_list(cfg, "m");
  if (c.levels.size() < 4) throw InsufficientDataError("insufficient refinements: at least 4 grid levels are required");
  c.validate();
  require(!ms.empty(), "m must be non-empty");
  for (int m : ms) require(m >= 1 && m <= 4, "m must lie in 1..4");

  return [=](RunReport& report, Outputs& out) {
    CsvTable t;
    t.columns = {"m", "n", "h", "max_diff", "mass_defect"};
    t.data.resize(5);
    for (int m : ms) {
      const CertificateResult r = generator_certificate(m, c);
      for (const auto& l : r.levels) {
        t.data[0].push_back(m);
        t.data[1].push_back(l.n);
        t.data[2].push_back(l.h);
        t.data[3].push_back(l.max_diff);
        t.data[4].push_back(l.mass_defect);
      }
      const std::string k = "_m" + std::to_string(m);
      report.metric("order" + k, r.order);
      report.metric("mass_order" + k, r.mass_order);
      report.metric("max_diff_finest" + k, r.levels.back().max_diff);
      report.flag("order" + k, r.order >= min_order);
    }
    out.add("certificate.csv", std::move(t));
  };
}

// ---------------------------------------------------------------- stationary

json stationary_defaults() {
  return json{{"schema_version", kSchemaVersion},
              {"seed", 20240611},
              {"workers", 1},
              {"m", 2},
              {"alpha", 1.0},
              {"lambda", 2.0},
              {"gamma", 1.0},
              {"x_max", nullptr},
              {"points", 2001},
              {"residual_levels", {257, 513, 1025, 2049}},
              {"residual_window_lo", 0.25},
              {"mc", {{"n_paths", 100000}, {"dt", 0.01}, {"t_end_alpha", 20.0}, {"x0", 0.0}, {"bins", 100}}},
              {"tolerances", {{"ks", 0.02}, {"mean_se", 4.0}, {"order", kOrderThreshold}, {"cumulant_rel", 1e-6}}}};
}

Runner prepare_stationary(const json& cfg, const Common& common) {
  const int m = integer(cfg, "m");
  const double alpha = num(cfg, "alpha"), lambda = num(cfg, "lambda"), gamma = num(cfg, "gamma");
  const int points = integer(cfg, "points");
  const std::vector<int> levels = int_list(cfg, "residual_levels");
  const double window_lo = num(cfg, "residual_window_lo");
  const json& mc = cfg.at("mc");
  const int n_paths = integer(mc, "n_paths"), bins = integer(mc, "bins");
  const double dt = num(mc, "dt"), t_end = num(mc, "t_end_alpha") / alpha, x0 = num(mc, "x0");
  const json& tol = cfg.at("tolerances");
  const double tol_ks = num(tol, "ks"), tol_se = num(tol, "mean_se"), tol_order = num(tol, "order");
  const double tol_cum = num(tol, "cumulant_rel");

  require(m == 1 || m == 2, "m must be 1 or 2 (closed-form stationary laws)");
  require(alpha > 0.0, "alpha must be positive");
  require(gamma > 0.0, "gamma must be positive");
  if (!(lambda > 0.0))
    throw NormalizationError("degenerate: with lambda <= 0 the stationary law collapses onto 0 and has no density");
  const double rho = lambda / alpha;
  const double x_max = cfg.at("x_max").is_null() ? (m * rho + 12.0 * std::sqrt(m * rho + 1.0) + 25.0) / gamma
                                                  : num(cfg, "x_max");
  require(x_max > 0.0, "x_max must be positive");
  require(points >= 9, "points must be >= 9");
  require(levels.size() >= 3, "residual_levels needs at least 3 grids");
  for (int n : levels) require(n >= 9, "residual_levels entries must be >= 9");
  require(window_lo > 0.0 && window_lo < x_max, "residual_window_lo must lie in (0, x_max)");
  require(bins >= 1, "mc.bins must be positive");
  require(x0 >= 0.0, "mc.x0 must be >= 0");
  const int stride = std::max(1, final_only_stride(dt, t_end) / 40);
  const SimConfig sim = sim_config(dt, t_end, n_paths, stride, common, x0);
  const ModelSpec model{LinearRestoring{alpha}, ZeroDiffusion{}, ConstantRate{lambda}, ErlangJumpLaw{m, gamma}};
  model.validate();

  return [=](RunReport& report, Outputs& out) {
    const RealFn f = [&](double x) { return alpha * x; };
    std::function<double(double)> density;
    GridFunction<double> table;
    const GridSpec grid{0.0, x_max, points};
    if (m == 1) {
      table = stationary_m1(f, [&](double) { return lambda; }, gamma, grid, Interval{0.0, kInfinity});
    } else {
      table = GridFunction<double>::sample(
          grid, [&](double x) { return x <= 0.0 ? 0.0 : stationary_ou_m2(alpha, lambda, gamma, x); });
    }
    density = m == 1 ? std::function<double(double)>([&](double x) {
      // Gamma(ρ, γ) law, the closed form of the m = 1 density for linear drift.
      return x <= 0.0 ? 0.0 : std::exp(rho * std::log(gamma) + (rho - 1.0) * std::log(x) - gamma * x - log_gamma(rho));
    })
                     : std::function<double(double)>(
                           [&](double x) { return x <= 0.0 ? 0.0 : stationary_ou_m2(alpha, lambda, gamma, x); });
    {
      CsvTable t;
      t.columns = {"x", "density"};
      t.data.resize(2);
      for (int i = 0; i < grid.n; ++i) {
        t.data[0].push_back(grid.x(i));
        t.data[1].push_back(table.values[i]);
      }
      out.add("density.csv", std::move(t));
    }
    if (m == 1) {
      double worst = 0.0;
      for (int i = 1; i < grid.n; ++i) worst = std::max(worst, std::abs(table.values[i] - density(grid.x(i))));
      report.metric("gamma_law_max_err", worst);
    }

    const double kappa = cumulant(1, m, gamma, lambda, f);
    const double exact_mean = m * lambda / (alpha * gamma);
    report.metric("cumulant_1", kappa);
    report.metric("mean_theory", exact_mean);
    report.metric("cumulant_rel_err", kappa / exact_mean - 1.0);
    report.flag("cumulant", std::abs(kappa / exact_mean - 1.0) < tol_cum);

    // Residual of the differential stationary equation on refining grids.
    std::vector<double> hs, errs;
    for (int n : levels) {
      const GridSpec g{-2.0, x_max, n};
      const auto P = GridFunction<double>::sample(g, [&](double x) { return x <= 0.0 ? 0.0 : density(x); });
      ResidualOptions ro;
      ro.window_lo = window_lo;
      hs.push_back(g.h());
      errs.push_back(stationary_residual(P, model, ro));
    }
    const OrderFit fit = fit_order(hs, errs);
    report.metric("residual_finest", errs.back());
    report.metric("residual_order", fit.order);
    report.flag("residual_order", fit.order >= tol_order);

    const TabulatedCdf cdf = tabulate_cdf(density, 0.0, x_max, 4000, {}, 0.0, 0.0);
    report.metric("cdf_mass", cdf.total());
    const TrajectoryBatch batch = simulate_paths(model, sim);
    const std::vector<double> final = batch.final_positions();
    const double ks = ks_distance(final, [&](double x) { return cdf(x); });
    const MeanEstimate tail = tail_time_average(batch, 0.5 * t_end);
    const MeanEstimate fin = sample_mean(final);
    report.metric("KS", ks);
    report.metric("mean", tail.mean);
    report.metric("mean_se", tail.std_error);
    report.metric("mean_z", (tail.mean - exact_mean) / tail.std_error);
    report.metric("final_mean", fin.mean);
    report.metric("final_mean_se", fin.std_error);
    report.flag("KS", ks < tol_ks);
    report.flag("mean", std::abs(tail.mean - exact_mean) <= tol_se * tail.std_error);
    out.add("histogram.csv", histogram_table(final, bins, [&](double x) { return cdf(x); }));
  };
}

// ---------------------------------------------------------------- transient

json transient_defaults() {
  return json{{"schema_version", kSchemaVersion},
              {"seed", 20240611},
              {"workers", 1},
              {"m", 1},
              {"alpha", 1.0},
              {"lambda", 2.0},
              {"gamma", 1.0},
              {"x0", 0.0},
              {"times", {0.35, 0.7, 1.4}},
              {"stationary_time_alpha", 40.0},
              {"laplace_u", {0.5, 1.0, 2.0}},
              {"cells", 4000},
              {"mc", {{"n_paths", 100000}, {"dt", 1e-3}, {"bins", 100}}},
              {"tolerances", {{"mass", 1e-4}, {"ks", 0.02}, {"stationary_sup", 1e-3}, {"laplace_se", 4.0}}}};
}

Runner prepare_transient(const json& cfg, const Common& common) {
  LinearShotNoise p;
  p.m = integer(cfg, "m");
  p.alpha = num(cfg, "alpha");
  p.lambda = num(cfg, "lambda");
  p.gamma = num(cfg, "gamma");
  p.x0 = num(cfg, "x0");
  p.validate();
  const std::vector<double> times = num_list(cfg, "times");
  const double t_stat = num(cfg, "stationary_time_alpha") / p.alpha;
  const std::vector<double> us = num_list(cfg, "laplace_u");
  const int cells = integer(cfg, "cells");
  const json& mc = cfg.at("mc");
  const int n_paths = integer(mc, "n_paths"), bins = integer(mc, "bins");
  const double dt = num(mc, "dt");
  const json& tol = cfg.at("tolerances");
  const double tol_mass = num(tol, "mass"), tol_ks = num(tol, "ks"), tol_sup = num(tol, "stationary_sup");
  const double tol_se = num(tol, "laplace_se");

  require(!times.empty(), "times must be non-empty");
  for (double t : times) require(t > 0.0, "times must be positive (t = 0 is the initial atom only)");
  require(t_stat > 0.0, "stationary_time_alpha must be positive");
  for (double u : us) require(u > 0.0, "laplace_u entries must be positive");
  require(cells >= 10, "cells must be >= 10");
  require(bins >= 1, "mc.bins must be positive");
  require(p.lambda > 0.0, "lambda must be positive");
  std::vector<SimConfig> sims;
  for (double t : times) sims.push_back(sim_config(std::min(dt, t), t, n_paths, final_only_stride(std::min(dt, t), t), common, p.x0));
  const ModelSpec model{LinearRestoring{p.alpha}, ZeroDiffusion{}, ConstantRate{p.lambda}, ErlangJumpLaw{p.m, p.gamma}};
  model.validate();

  return [=](RunReport& report, Outputs& out) {
    for (std::size_t k = 0; k < times.size(); ++k) {
      const double t = times[k];
      const std::string tt = "_t" + tag(t);
      const std::vector<double> final = simulate_paths(model, sims[k]).final_positions();
      if (p.m == 1) {
        const TabulatedCdf cdf = transient_m1_cdf(t, p, cells);
        const double mass = cdf.total();
        const double ks = ks_distance(final, [&](double x) { return cdf(x); }, [&](double x) { return cdf.left(x); });
        report.metric("atom_weight" + tt, cdf.atom_weight);
        report.metric("mass" + tt, mass);
        report.metric("KS" + tt, ks);
        report.flag("mass" + tt, std::abs(mass - 1.0) <= tol_mass);
        report.flag("KS" + tt, ks < tol_ks);
        CsvTable d;
        d.columns = {"x", "density"};
        d.data.resize(2);
        const double x_lo = p.x0 * std::exp(-p.alpha * t);
        const double x_hi = cdf.x.back();
        for (int i = 1; i <= 1000; ++i) {
          const double x = x_lo + (x_hi - x_lo) * i / 1000.0;
          d.data[0].push_back(x);
          d.data[1].push_back(transient_m1_linear(x, t, p).density);
        }
        out.add("transient" + tt + ".csv", std::move(d));
        out.add("histogram" + tt + ".csv",
                histogram_table(final, bins, [&](double x) { return cdf(x); }));
      }
      for (double u : us) {
        std::vector<double> e(final.size());
        for (std::size_t i = 0; i < final.size(); ++i) e[i] = std::exp(-u * final[i]);
        const MeanEstimate est = sample_mean(e);
        const double exact = laplace_transform_linear(u, t, p);
        const std::string k2 = "_u" + tag(u) + tt;
        report.metric("laplace_mc" + k2, est.mean);
        report.metric("laplace_exact" + k2, exact);
        report.metric("laplace_z" + k2, (est.mean - exact) / est.std_error);
        report.flag("laplace" + k2, std::abs(est.mean - exact) <= tol_se * est.std_error);
      }
    }
    if (p.m == 1) {
      // Relaxation onto the Gamma(λ/α, γ) stationary law.
      const double rho = p.lambda / p.alpha;
      const double x_hi = (rho + 12.0 * std::sqrt(rho + 1.0) + 25.0) / p.gamma;
      const double x_lo = p.x0 * std::exp(-p.alpha * t_stat);
      double worst = 0.0;
      for (int i = 1; i <= 4000; ++i) {
        const double x = x_lo + (x_hi - x_lo) * i / 4000.0;
        const double gamma_pdf =
            std::exp(rho * std::log(p.gamma) + (rho - 1.0) * std::log(x) - p.gamma * x - log_gamma(rho));
        worst = std::max(worst, std::abs(transient_m1_linear(x, t_stat, p).density - gamma_pdf));
      }
      report.metric("stationary_time", t_stat);
      report.metric("stationary_sup_err", worst);
      report.flag("stationary_sup", worst < tol_sup);
    }
  };
}

// ---------------------------------------------------------------- tanh

json tanh_defaults() {
  return json{{"schema_version", kSchemaVersion},
              {"seed", 20240611},
              {"workers", 1},
              {"lambda", 1.0},
              {"gamma", 2.0},
              {"beta", 0.5},
              {"t", 1.0},
              {"alpha", 1.0},
              {"cells", 4000},
              {"mc",
               {{"n_paths", 100000},
                {"dt", 1e-3},
                {"stationary_dt", 1e-2},
                {"stationary_t_end_alpha", 20.0},
                {"bins", 100}}},
              {"tolerances", {{"mass", 1e-4}, {"transient_ks", 0.02}, {"symmetry_ks", 0.02}, {"stationary_ks", 0.03}}}};
}

Runner prepare_tanh(const json& cfg, const Common& common) {
  TanhJumpDiffusion p;
  p.lambda = num(cfg, "lambda");
  p.gamma = num(cfg, "gamma");
  p.beta = num(cfg, "beta");
  p.validate();
  const double t = num(cfg, "t"), alpha = num(cfg, "alpha");
  const int cells = integer(cfg, "cells");
  const json& mc = cfg.at("mc");
  const int n_paths = integer(mc, "n_paths"), bins = integer(mc, "bins");
  const double dt = num(mc, "dt"), sdt = num(mc, "stationary_dt");
  const double s_end = num(mc, "stationary_t_end_alpha") / alpha;
  const json& tol = cfg.at("tolerances");
  const double tol_mass = num(tol, "mass"), tol_ks = num(tol, "transient_ks"), tol_sym = num(tol, "symmetry_ks");
  const double tol_sks = num(tol, "stationary_ks");
  require(t > 0.0, "t must be positive");
  require(cells >= 10, "cells must be >= 10");
  require(bins >= 1, "mc.bins must be positive");
  const TiltedOuLaw law = TiltedOuLaw::make(alpha, p.lambda, p.gamma, p.beta);
  const SimConfig sim = sim_config(dt, t, n_paths, final_only_stride(dt, t), common);
  const SimConfig ssim = sim_config(sdt, s_end, n_paths, final_only_stride(sdt, s_end), common);

  return [=](RunReport& report, Outputs& out) {
    const double mass = tanh_transient_mass(t, p);
    report.metric("transient_mass", mass);
    report.flag("transient_mass", std::abs(mass - 1.0) <= tol_mass);

    const TabulatedCdf cdf = tanh_transient_cdf(t, p, cells);
    const std::vector<double> x = simulate_tanh(p.lambda, p.gamma, p.beta, sim).final_positions();
    const double ks = ks_distance(x, [&](double v) { return cdf(v); });
    std::vector<double> flipped(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) flipped[i] = -x[i];
    const double sym = ks_two_sample(x, flipped);
    report.metric("transient_KS", ks);
    report.metric("symmetry_KS", sym);
    report.flag("transient_KS", ks < tol_ks);
    report.flag("symmetry_KS", sym < tol_sym);
    {
      const double w = cdf.x.back();
      std::vector<double> grid(1001);
      for (int i = 0; i <= 1000; ++i) grid[i] = -w + 2.0 * w * i / 1000.0;
      CsvTable d;
      d.columns = {"x", "density"};
      d.data = {grid, tanh_transient(grid, t, p)};
      out.add("tanh_transient.csv", std::move(d));
      out.add("tanh_histogram.csv", histogram_table(x, bins, [&](double v) { return cdf(v); }));
    }

    const TabulatedCdf scdf = ou_tanh_stationary_cdf(law, cells);
    const TabulatedCdf smooth = ou_tanh_stationary_smoothed_cdf(law, cells);
    const std::vector<double> y = simulate_ou_tanh(alpha, p.lambda, p.gamma, p.beta, ssim).final_positions();
    const double sks = ks_distance(y, [&](double v) { return scdf(v); });
    const double sks_smooth = ks_distance(y, [&](double v) { return smooth(v); });
    const MeanEstimate ym = sample_mean(y);
    report.metric("stationary_mass", scdf.total());
    report.metric("stationary_KS", sks);
    report.metric("stationary_KS_smoothed", sks_smooth);
    report.metric("stationary_mean", ym.mean);
    report.metric("stationary_mean_se", ym.std_error);
    report.flag("stationary_KS", sks < tol_sks);
    {
      const double w = scdf.x.back();
      CsvTable d;
      d.columns = {"y", "mixture", "smoothed"};
      d.data.resize(3);
      // Cell midpoints, so the singular centers ±β/α are never nodes.
      for (int i = 0; i < 1000; ++i) {
        const double v = -w + 2.0 * w * (i + 0.5) / 1000.0;
        d.data[0].push_back(v);
        d.data[1].push_back(ou_tanh_stationary(v, law));
        d.data[2].push_back(ou_tanh_stationary_smoothed(v, law));
      }
      out.add("ou_stationary.csv", std::move(d));
      out.add("ou_histogram.csv", histogram_table(y, bins, [&](double v) { return scdf(v); }));
    }
  };
}

// ---------------------------------------------------------------- verify-specfun

json specfun_defaults() {
  return json{{"schema_version", kSchemaVersion}, {"seed", 20240611}, {"workers", 1}, {"samples", 200}};
}

Runner prepare_specfun(const json& cfg, const Common& common) {
  const int samples = integer(cfg, "samples");
  require(samples >= 100, "samples must be >= 100");
  return [=](RunReport& report, Outputs& out) {
    CsvTable t;
    t.columns = {"function_index", "max_error", "tolerance", "samples"};
    t.data.resize(4);
    int idx = 0;
    for (const OracleReport& r : verify_specfun(common.seed, samples)) {
      report.metric("max_error_" + r.function, r.max_error);
      report.metric("tolerance_" + r.function, r.tolerance);
      report.flag(r.function, r.passed);
      t.data[0].push_back(idx++);
      t.data[1].push_back(r.max_error);
      t.data[2].push_back(r.tolerance);
      t.data[3].push_back(r.samples);
    }
    out.add("specfun_errors.csv", std::move(t));
  };
}

const std::vector<Command>& commands() {
  static const std::vector<Command> list{
      {"wave", wave_defaults, prepare_wave},
      {"verify-master", master_defaults, prepare_master},
      {"stationary", stationary_defaults, prepare_stationary},
      {"transient", transient_defaults, prepare_transient},
      {"tanh", tanh_defaults, prepare_tanh},
      {"verify-specfun", specfun_defaults, prepare_specfun},
  };
  return list;
}

void write_text(const std::filesystem::path& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << body;
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

const std::vector<std::string>& cli_commands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& c : commands()) v.push_back(c.name);
    return v;
  }();
  return names;
}

int run_cli(const CliRequest& request, std::ostream& log) {
  const auto start = std::chrono::steady_clock::now();
  const Command* cmd = nullptr;
  for (const auto& c : commands())
    if (c.name == request.command) cmd = &c;
  if (!cmd) {
    log << "error: unknown command '" << request.command << "'\n";
    return kExitInvalidConfig;
  }

  json cfg = cmd->defaults();
  Runner runner;
  Common common;
  try {
    if (request.config) {
      std::ifstream in(*request.config);
      if (!in) throw ConfigError("cannot read config file " + request.config->string());
      json user;
      try {
        user = json::parse(in);
      } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
      }
      if (!user.is_object()) throw ConfigError("config must be a JSON object");
      if (!user.contains("schema_version")) throw ConfigError("config lacks schema_version");
      if (integer_value(user.at("schema_version"), "schema_version") != kSchemaVersion)
        throw ConfigError("unsupported schema_version (expected " + std::to_string(kSchemaVersion) + ")");
      overlay(cfg, user, "");
    }
    if (request.seed) cfg["seed"] = *request.seed;
    if (request.workers) cfg["workers"] = *request.workers;
    const json& seed = cfg.at("seed");
    if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0))
      throw ConfigError("seed must be a non-negative integer");
    common.seed = seed.get<std::uint64_t>();
    common.workers = integer(cfg, "workers");
    require(common.workers >= 1, "workers must be >= 1");
    runner = cmd->prepare(cfg, common);
  } catch (const std::exception& e) {
    log << "invalid configuration: " << e.what() << "\n";
    return kExitInvalidConfig;
  }

  RunReport report;
  report.command = cmd->name;
  report.params = cfg;
  report.seed = common.seed;
  Outputs outputs;
  try {
    runner(report, outputs);
  } catch (const std::exception& e) {
    report.error = e.what();
    log << "run failed: " << e.what() << "\n";
  }
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  try {
    std::filesystem::create_directories(request.out);
    write_text(request.out / "config.json", cfg.dump(2) + "\n");
    for (const auto& [name, table] : outputs.tables) write_csv(request.out / name, table);
    write_text(request.out / "report.json", report.to_json().dump(2) + "\n");
  } catch (const std::exception& e) {
    log << "error writing outputs: " << e.what() << "\n";
    return kExitToleranceFailed;
  }

  for (const auto& [name, ok] : report.flags.items())
    if (!ok.get<bool>()) log << "tolerance failed: " << name << "\n";
  log << report.command << ": " << (report.passed() ? "all tolerances met" : "FAILED") << " ("
      << report.wall_seconds << " s)\n";
  return report.passed() ? kExitOk : kExitToleranceFailed;
}

int cli_main(int argc, char** argv) {
  CLI::App app{"Compound Poisson shot-noise simulation and verification runner"};
  app.require_subcommand(1);
  CliRequest request;
  std::string config;
  std::uint64_t seed = 0;
  int workers = 1;
  for (const auto& name : cli_commands()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "JSON config file (defaults apply when omitted)")->check(CLI::ExistingFile);
    sub->add_option("--out", request.out, "Output directory")->required();
    sub->add_option("--seed", seed, "Seed override");
    sub->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
    sub->callback([&, sub, name] {
      request.command = name;
      if (sub->count("--config")) request.config = config;
      if (sub->count("--seed")) request.seed = seed;
      if (sub->count("--workers")) request.workers = workers;
    });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalidConfig;
  }
  return run_cli(request, std::cerr);
}

}  // namespace shotnoise
