// End-to-end acceptance run: drives the experiment runner on the reference
// configurations and prints one PASS/FAIL line per criterion.

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <json.hpp>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "shotnoise/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Pinned thresholds.
constexpr double kOrder = 1.7;
constexpr int kMinLevels = 4;
constexpr double kKsStationary = 0.02;
constexpr double kMeanSe = 4.0;
constexpr double kCumulantRel = 1e-6;
constexpr double kMassTransient = 1e-4;
constexpr double kKsTransient = 0.02;
constexpr double kStationarySup = 1e-3;
constexpr double kSpeedRel = 0.05;
constexpr double kSpeedRatio = 2.0;
constexpr double kKsSwarm = 0.05;
constexpr double kC1 = 1.7811;  // e^{-ψ(1)}
constexpr double kC2 = 4.8414;  // e^{ψ(2)-2ψ(1)}
constexpr double kSpeedDigits = 1e-4;  // one unit in the last quoted digit
constexpr double kMellin = 1e-5;
constexpr double kMassTanh = 1e-4;
constexpr double kKsTanh = 0.02;
constexpr double kKsMixture = 0.03;
constexpr double kMassProfile = 1e-6;
constexpr double kMeanProfile = 1e-5;
constexpr int kMinSpecfunSamples = 100;

struct Run {
  int code = -1;
  fs::path out;
  json report;
  double seconds = 0.0;
};

class Harness {
 public:
  explicit Harness(fs::path root) : root_(std::move(root)) { fs::create_directories(root_); }

  Run run(const std::string& command, json config, const std::string& name, int workers = 1) {
    config["schema_version"] = 1;
    config["workers"] = workers;
    const fs::path dir = root_ / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    const fs::path cfg = dir / "input.json";
    std::ofstream(cfg) << config.dump(2) << "\n";
    shotnoise::CliRequest req;
    req.command = command;
    req.config = cfg;
    req.out = dir / "out";
    std::ostringstream log;
    const auto t0 = std::chrono::steady_clock::now();
    Run r;
    r.code = shotnoise::run_cli(req, log);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.out = req.out;
    if (fs::exists(r.out / "report.json")) {
      std::ifstream in(r.out / "report.json");
      r.report = json::parse(in);
    }
    std::cerr << log.str();
    return r;
  }

 private:
  fs::path root_;
};

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back("FAILED " + what);
    }
  }
  void note(const std::string& s) { notes.push_back(s); }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

double metric(const Run& r, const std::string& name) {
  const json& m = r.report.at("metrics");
  if (!m.contains(name)) throw std::runtime_error("metric missing from report: " + name);
  return m.at(name).get<double>();
}

void check_metric(Outcome& o, const Run& r, const std::string& name, auto&& ok, const std::string& bound) {
  double v = std::nan("");
  try {
    v = metric(r, name);
  } catch (const std::exception& e) {
    o.require(false, e.what());
    return;
  }
  const bool good = ok(v);
  o.require(good, name + " = " + fmt(v) + " (need " + bound + ")");
  if (good) o.note(name + " = " + fmt(v));
}

void check_budget(Outcome& o, double seconds, double budget) {
  o.require(seconds < budget, "runtime " + fmt(seconds) + " s over budget " + fmt(budget) + " s");
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<std::vector<double>> read_csv(const fs::path& p) {
  std::istringstream in(slurp(p));
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::stringstream ls(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

// Composite Simpson on a uniform node set with an odd number of points.
double simpson(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 3 || n % 2 == 0) throw std::runtime_error("simpson: needs an odd number of nodes >= 3");
  const double h = (x.back() - x.front()) / static_cast<double>(n - 1);
  double s = y.front() + y.back();
  for (std::size_t i = 1; i + 1 < n; ++i) s += (i % 2 ? 4.0 : 2.0) * y[i];
  return s * h / 3.0;
}

std::map<std::string, std::string> csv_bytes(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".csv") out[e.path().filename().string()] = slurp(e.path());
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria runner"};
  std::string workdir = "acceptance_runs";
  app.add_option("--workdir", workdir, "Scratch directory for run outputs");
  CLI11_PARSE(app, argc, argv);

  Harness h(workdir);
  std::vector<std::pair<std::string, Outcome>> results;
  auto record = [&](const std::string& title, Outcome o) { results.emplace_back(title, std::move(o)); };

  const json stationary_cfg = {{"m", 2}, {"alpha", 1.0}, {"lambda", 2.0}, {"gamma", 1.0},
                               {"mc", {{"n_paths", 100000}, {"t_end_alpha", 20.0}}}};
  const json wave_cfg = {{"m", {1, 2}}, {"beta", {1.0, 2.0}}, {"gamma", 1.0}, {"swarm", {{"n_agents", 2000}}}};
  const json tanh_cfg = {{"lambda", 1.0}, {"gamma", 2.0}, {"beta", 0.5}, {"t", 1.0}, {"alpha", 1.0},
                         {"mc", {{"n_paths", 100000}}}};

  // 1
  {
    Outcome o;
    const Run r = h.run("verify-master", {{"m", {1, 2, 3, 4}}}, "c1_master");
    o.require(r.code != shotnoise::kExitInvalidConfig && !r.report.is_null(), "run completed");
    if (!r.report.is_null()) {
      const auto levels = r.report.at("parameters").at("levels");
      o.require(static_cast<int>(levels.size()) >= kMinLevels, "at least 4 refinement levels");
      o.note("finest grid " + levels.back().dump() + " nodes");
      for (int m = 1; m <= 4; ++m)
        check_metric(o, r, "order_m" + std::to_string(m), [](double v) { return v >= kOrder; }, ">= 1.7");
    }
    check_budget(o, r.seconds, 60.0);
    o.note(fmt(r.seconds) + " s");
    record("certificate: integral vs differential generator, m = 1..4", o);
  }

  // 2
  const Run st2 = h.run("stationary", stationary_cfg, "c2_stationary_m2");
  {
    Outcome o;
    o.require(!st2.report.is_null(), "run completed");
    if (!st2.report.is_null()) {
      check_metric(o, st2, "residual_order", [](double v) { return v >= kOrder; }, ">= 1.7");
      check_metric(o, st2, "KS", [](double v) { return v < kKsStationary; }, "< 0.02");
      check_metric(o, st2, "mean_z", [](double v) { return std::abs(v) <= kMeanSe; }, "|z| <= 4");
    }
    check_budget(o, st2.seconds, 120.0);
    o.note(fmt(st2.seconds) + " s");
    record("stationary OU, m = 2: residual order, KS, mean", o);
  }

  // 3
  {
    Outcome o;
    json cfg1 = stationary_cfg;
    cfg1["m"] = 1;
    const Run st1 = h.run("stationary", cfg1, "c3_stationary_m1");
    for (const auto& [m, r] : {std::pair<int, const Run*>{1, &st1}, {2, &st2}}) {
      if (r->report.is_null()) {
        o.require(false, "run m=" + std::to_string(m) + " completed");
        continue;
      }
      const double alpha = 1.0, lambda = 2.0, gamma = 1.0;
      const double exact = lambda * m / (alpha * gamma);
      const double k1 = metric(*r, "cumulant_1");
      const double mean = metric(*r, "mean"), se = metric(*r, "mean_se");
      o.require(std::abs(k1 / exact - 1.0) < kCumulantRel,
                "kappa1 m=" + std::to_string(m) + " = " + fmt(k1) + " vs " + fmt(exact));
      o.require(std::abs(mean - k1) <= kMeanSe * se,
                "MC mean m=" + std::to_string(m) + " " + fmt(mean) + " within 4 se of " + fmt(k1));
      o.note("m=" + std::to_string(m) + ": kappa1 " + fmt(k1) + ", MC mean " + fmt(mean) + " +- " + fmt(se));
    }
    record("cumulant formula vs lambda m/(alpha gamma) and MC mean", o);
  }

  // 4
  {
    Outcome o;
    const Run r = h.run("transient", {{"m", 1}, {"alpha", 1.0}, {"lambda", 2.0}, {"gamma", 1.0}, {"times", {0.35, 0.7, 1.4}}},
                        "c4_transient");
    o.require(!r.report.is_null(), "run completed");
    if (!r.report.is_null()) {
      for (const char* t : {"0.35", "0.7", "1.4"}) {
        const std::string tt = std::string("_t") + t;
        check_metric(o, r, "mass" + tt, [](double v) { return std::abs(v - 1.0) <= kMassTransient; }, "1 +- 1e-4");
        check_metric(o, r, "KS" + tt, [](double v) { return v < kKsTransient; }, "< 0.02");
        const double w = metric(r, "atom_weight" + tt);
        o.require(std::abs(w - std::exp(-2.0 * std::stod(t))) < 1e-12, std::string("atom weight e^{-lambda t} at t=") + t);
      }
      check_metric(o, r, "stationary_sup_err", [](double v) { return v < kStationarySup; }, "< 1e-3");
    }
    check_budget(o, r.seconds, 120.0);
    o.note(fmt(r.seconds) + " s");
    record("transient m = 1: mass, KS at three times, long-time limit", o);
  }

  // 5, 6, 8 share one wave run
  const Run wv = h.run("wave", wave_cfg, "c5_wave");
  {
    Outcome o;
    o.require(!wv.report.is_null(), "run completed");
    if (!wv.report.is_null()) {
      check_metric(o, wv, "C1", [](double v) { return std::abs(v - kC1) < kSpeedDigits; }, "~1.7811");
      check_metric(o, wv, "C2", [](double v) { return std::abs(v - kC2) < kSpeedDigits; }, "~4.8414");
      for (const char* k : {"_m1", "_m2"}) {
        check_metric(o, wv, std::string("speed_rel_err") + k, [](double v) { return std::abs(v) <= kSpeedRel; }, "|.| <= 0.05");
        check_metric(o, wv, std::string("KS") + k, [](double v) { return v < kKsSwarm; }, "< 0.05");
      }
      check_metric(o, wv, "speed_ratio", [](double v) { return v > kSpeedRatio; }, "> 2");
    }
    check_budget(o, wv.seconds, 300.0);
    o.note(fmt(wv.seconds) + " s");
    record("flocking speeds, 2000 agents, beta = gamma = 1", o);
  }
  {
    Outcome o;
    if (wv.report.is_null()) o.require(false, "wave run completed");
    for (const char* b : {"1", "2"}) {
      if (wv.report.is_null()) break;
      const std::string bt = std::string("_beta") + b;
      check_metric(o, wv, "mellin_G0" + bt, [](double v) { return std::abs(v - 1.0) <= kMellin; }, "1 +- 1e-5");
      check_metric(o, wv, "mellin_dG0" + bt, [](double v) { return std::abs(v) <= kMellin; }, "0 +- 1e-5");
      check_metric(o, wv, "schrodinger_order" + bt, [](double v) { return v >= kOrder; }, ">= 1.7");
    }
    record("Whittaker wave: Mellin moment at 0 and Schrodinger residual order", o);
  }

  // 7
  const Run th = h.run("tanh", tanh_cfg, "c7_tanh");
  {
    Outcome o;
    o.require(!th.report.is_null(), "run completed");
    if (!th.report.is_null()) {
      check_metric(o, th, "transient_mass", [](double v) { return std::abs(v - 1.0) <= kMassTanh; }, "1 +- 1e-4");
      check_metric(o, th, "transient_KS", [](double v) { return v < kKsTanh; }, "< 0.02");
      check_metric(o, th, "stationary_KS", [](double v) { return v < kKsMixture; }, "< 0.03");
      o.note("diagnostic stationary_KS_smoothed = " + fmt(metric(th, "stationary_KS_smoothed")));
    }
    check_budget(o, th.seconds, 180.0);
    o.note(fmt(th.seconds) + " s");
    record("tanh jump diffusion: transient mass and KS, OU stationary mixture KS", o);
  }

  // 8
  {
    Outcome o;
    for (const char* m : {"1", "2"})
      for (const char* b : {"1", "2"}) {
        const fs::path p = wv.out / (std::string("profile_m") + m + "_beta" + b + ".csv");
        if (!fs::exists(p)) {
          o.require(false, p.filename().string() + " written");
          continue;
        }
        const auto rows = read_csv(p);
        std::vector<double> x, y, xy;
        for (const auto& row : rows) {
          x.push_back(row.at(0));
          y.push_back(row.at(1));
          xy.push_back(row.at(0) * row.at(1));
        }
        const double mass = simpson(x, y), mean = simpson(x, xy);
        const std::string tag = std::string("m=") + m + " beta=" + b;
        o.require(std::abs(mass - 1.0) <= kMassProfile, tag + " mass " + fmt(mass));
        o.require(std::abs(mean) <= kMeanProfile, tag + " mean " + fmt(mean));
        o.note(tag + ": mass-1 " + fmt(mass - 1.0) + ", mean " + fmt(mean));
      }
    record("profile CSVs: Simpson mass and mean at two beta values", o);
  }

  // 9
  {
    Outcome o;
    const Run r = h.run("verify-specfun", {{"samples", 200}}, "c9_specfun");
    o.require(r.code == shotnoise::kExitOk, "all special functions within tolerance");
    if (!r.report.is_null()) {
      o.require(r.report.at("parameters").at("samples").get<int>() >= kMinSpecfunSamples, ">= 100 samples");
      for (const auto& [name, ok] : r.report.at("flags").items()) o.require(ok.get<bool>(), name);
      o.note(std::to_string(r.report.at("flags").size()) + " functions checked");
    }
    check_budget(o, r.seconds, 60.0);
    o.note(fmt(r.seconds) + " s");
    record("special functions against independent references", o);
  }

  // 10
  {
    Outcome o;
    const std::vector<std::tuple<std::string, json, const Run*>> reruns = {
        {"stationary", stationary_cfg, &st2}, {"wave", wave_cfg, &wv}, {"tanh", tanh_cfg, &th}};
    for (const auto& [command, cfg, base] : reruns) {
      const auto ref = csv_bytes(base->out);
      o.require(!ref.empty(), command + " wrote CSVs");
      for (int w : {2, 8}) {
        const Run r = h.run(command, cfg, "c10_" + command + "_w" + std::to_string(w), w);
        const auto got = csv_bytes(r.out);
        o.require(got == ref, command + " CSVs identical with " + std::to_string(w) + " workers");
      }
      o.note(command + ": " + std::to_string(ref.size()) + " CSVs compared");
    }
    record("determinism across 1, 2 and 8 workers", o);
  }

  int failures = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& [title, o] = results[i];
    failures += !o.pass;
    std::cout << "criterion " << (i + 1) << (i + 1 < 10 ? "  " : " ") << (o.pass ? "PASS" : "FAIL") << "  " << title;
    std::string sep = "  [";
    for (const auto& n : o.notes) {
      std::cout << sep << n;
      sep = "; ";
    }
    std::cout << (o.notes.empty() ? "" : "]") << "\n";
  }
  std::cout << (results.size() - failures) << "/" << results.size() << " criteria passed\n";
  return failures == 0 ? 0 : 1;
}
