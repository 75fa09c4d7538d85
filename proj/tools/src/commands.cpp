#include "qfd/cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "qfd/errors.hpp"
#include "qfd/experiments.hpp"
#include "qfd/verification.hpp"

namespace qfd::cli {

namespace {

using json = nlohmann::ordered_json;

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json check_json(const CheckResult& c) {
  return {{"name", c.name},         {"status", c.passed ? "PASS" : "FAIL"}, {"worst", c.worst},
          {"tolerance", c.tolerance}, {"trials", c.trials},                 {"failures", c.failures},
          {"detail", c.detail}};
}

json estimate_json(const MonteCarloEstimate& e) {
  return {{"mean", e.mean}, {"stderr", e.std_error}, {"n", e.count}};
}

json fit_json(const DecayFit& f) {
  return {{"amplitude", f.amplitude}, {"rate", f.rate},     {"rate_stderr", f.rate_stderr},
          {"r_squared", f.r_squared}, {"R_min", f.R_min},   {"R_max", f.R_max},
          {"points", f.points}};
}

json curve_json(const std::vector<CurvePoint>& curve) {
  json a = json::array();
  for (const auto& p : curve) {
    json e = estimate_json(p.estimate);
    a.push_back({{"R", p.R}, {"mean", e["mean"]}, {"stderr", e["stderr"]}, {"n", e["n"]}});
  }
  return a;
}

class Report {
 public:
  Report(std::string command, const RunConfig& config, const RunOptions& options)
      : options_(options), start_(std::chrono::steady_clock::now()) {
    doc_["command"] = std::move(command);
    doc_["version"] = options.version;
    doc_["seed"] = config.seed;
    json cfg = json::object();
    for (const auto& [k, v] : echo(config)) cfg[k] = v;
    doc_["config"] = cfg;
    doc_["checks"] = json::array();
  }

  void check(const CheckResult& c) {
    doc_["checks"].push_back(check_json(c));
    all_passed_ = all_passed_ && c.passed;
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << "  worst=" << g17(c.worst)
              << "  tol=" << g17(c.tolerance);
    if (!c.detail.empty()) std::cout << "  (" << c.detail << ")";
    std::cout << '\n';
  }

  json& payload() { return doc_; }

  void write_curve(const std::string& x_name, const std::vector<std::pair<double, MonteCarloEstimate>>& rows) {
    std::ofstream out(path("curve.csv"));
    out << x_name << ",mean,stderr,n\n";
    for (const auto& [x, e] : rows) out << g17(x) << ',' << g17(e.mean) << ',' << g17(e.std_error) << ',' << e.count << '\n';
  }

  int finish() {
    doc_["status"] = all_passed_ ? "PASS" : "FAIL";
    std::ofstream(path("report.json")) << doc_.dump(2) << '\n';
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    std::cerr << doc_["command"].get<std::string>() << ": " << (all_passed_ ? "PASS" : "FAIL") << " in "
              << g17(std::round(secs * 100.0) / 100.0) << " s\n";
    return all_passed_ ? kPass : kViolation;
  }

 private:
  std::string path(const std::string& name) const {
    std::filesystem::create_directories(options_.out_dir);
    return (std::filesystem::path(options_.out_dir) / name).string();
  }

  RunOptions options_;
  json doc_;
  bool all_passed_ = true;
  std::chrono::steady_clock::time_point start_;
};

CurveSettings curve_settings(const RunConfig& c, const RunOptions& o) {
  CurveSettings s;
  s.beta = c.beta;
  s.window = c.window();
  s.eps = c.epsilon;
  s.R_grid = c.R_grid();
  s.z_grid = c.z_grid();
  s.samples = c.samples;
  s.threads = o.threads;
  return s;
}

ExperimentSettings experiment_settings(const RunConfig& c, const RunOptions& o) {
  ExperimentSettings s;
  s.beta = c.beta;
  s.window = c.window();
  s.eps = c.epsilon;
  s.samples = c.samples;
  s.threads = o.threads;
  s.times = c.time_scheme();
  s.t_range = c.t_range;
  s.safety_factor = c.safety_factor;
  return s;
}

struct CurveAndFit {
  std::vector<CurvePoint> curve;
  DecayFit fit;
  bool fitted = false;
  // Every curve value is exactly zero, so any (D, mu) satisfies the condition.
  bool vanishing = false;
  std::string error;
};

CurveAndFit condition_fit(const RunConfig& c, const RunOptions& o) {
  CurveAndFit r;
  const DisorderModel model = c.model();
  r.curve = condition_local_curve(model, model.box.center(), curve_settings(c, o));
  r.vanishing = std::all_of(r.curve.begin(), r.curve.end(), [](const CurvePoint& p) { return p.estimate.mean == 0.0; });
  if (r.vanishing) {
    // Smallest admissible constants: the bounds D e^{-mu d} are then as tight as possible.
    r.fit.amplitude = std::numeric_limits<double>::min();
    r.fit.rate = 0.0;
    r.fit.points = r.curve.size();
    r.fitted = true;
    return r;
  }
  try {
    r.fit = fit_decay(r.curve);
    r.fitted = true;
  } catch (const FitError& e) {
    r.error = e.what();
  }
  return r;
}

void add_condition(Report& report, const CurveAndFit& cf) {
  report.payload()["condition_curve"] = curve_json(cf.curve);
  if (cf.fitted) {
    report.payload()["fit"] = fit_json(cf.fit);
  } else {
    report.payload()["fit"] = nullptr;
  }
  CheckResult fit;
  fit.name = "decay-fit";
  fit.trials = cf.curve.size();
  fit.passed = cf.fitted;
  fit.failures = cf.fitted ? 0 : 1;
  fit.detail = cf.vanishing ? "curve identically zero; every D > 0 and mu satisfy the condition"
               : cf.fitted  ? "mu=" + g17(cf.fit.rate) + " +- " + g17(cf.fit.rate_stderr) + ", D=" + g17(cf.fit.amplitude) +
                               ", R2=" + g17(cf.fit.r_squared)
                            : cf.error;
  report.check(fit);
}

json experiment_json(const ExperimentReport& e) {
  json pts = json::array();
  for (const auto& p : e.points) {
    pts.push_back({{"label", p.label},
                   {"distance", p.distance},
                   {"mean", p.estimate.mean},
                   {"stderr", p.estimate.std_error},
                   {"n", p.estimate.count},
                   {"bound", p.bound},
                   {"flagged", p.flagged},
                   {"violated", p.violated},
                   {"assignments", p.combos},
                   {"exhaustive", p.exhaustive}});
  }
  return {{"kind", e.kind},
          {"constant", e.constant},
          {"violations", e.violations},
          {"deterministic_checks", e.deterministic_checks},
          {"deterministic_failures", e.deterministic_failures},
          {"deterministic_pass_rate", e.deterministic_pass_rate},
          {"samples", e.samples},
          {"points", pts}};
}

void add_experiment(Report& report, const ExperimentReport& e, const std::string& bound_name,
                    const std::string& deterministic_name) {
  report.payload()["experiment"] = experiment_json(e);
  CheckResult decay;
  decay.name = bound_name;
  decay.trials = e.points.size();
  decay.failures = e.violations;
  decay.passed = e.violations == 0;
  decay.detail = "violations beyond 2 stderr, D=" + g17(e.constant) + ", mu=" + g17(e.fit.rate);
  report.check(decay);
  CheckResult det;
  det.name = deterministic_name;
  det.trials = e.deterministic_checks;
  det.failures = e.deterministic_failures;
  det.passed = e.deterministic_failures == 0;
  det.worst = 1.0 - e.deterministic_pass_rate;
  det.detail = "pass rate " + g17(e.deterministic_pass_rate);
  report.check(det);
  std::vector<std::pair<double, MonteCarloEstimate>> rows;
  for (const auto& p : e.points) rows.emplace_back(p.distance, p.estimate);
  report.write_curve("distance", rows);
}

}  // namespace

int run_verify(const RunConfig& config, const RunOptions& options) {
  Report report("verify", config, options);
  for (const auto& c : verify_all({config.seed, options.threads})) report.check(c);
  return report.finish();
}

int run_condition(const RunConfig& config, const RunOptions& options) {
  Report report("condition", config, options);
  const CurveAndFit cf = condition_fit(config, options);
  add_condition(report, cf);
  CheckResult loc;
  loc.name = "localized-decay";
  loc.tolerance = 0.9;
  loc.trials = 1;
  loc.passed = cf.vanishing || (cf.fitted && cf.fit.rate > 0.0 && cf.fit.r_squared >= 0.9);
  loc.failures = loc.passed ? 0 : 1;
  loc.worst = cf.fitted ? cf.fit.r_squared : 0.0;
  loc.detail = cf.vanishing ? "curve identically zero" : "requires mu > 0 and R2 >= 0.9";
  report.check(loc);
  std::vector<std::pair<double, MonteCarloEstimate>> rows;
  for (const auto& p : cf.curve) rows.emplace_back(p.R, p.estimate);
  report.write_curve("R", rows);
  return report.finish();
}

int run_det_decay(const RunConfig& config, const RunOptions& options) {
  Report report("det-decay", config, options);
  const CurveAndFit cf = condition_fit(config, options);
  add_condition(report, cf);
  if (!cf.fitted) return report.finish();
  const DisorderModel model = config.model();
  const auto configs = block_pair_configs(model.box, config.det_N, config.det_shifts);
  auto e = corollary_decay_experiment(model, cf.fit, configs, experiment_settings(config, options));
  for (std::size_t i = 0; i < e.points.size(); ++i) e.points[i].label = "shift " + std::to_string(config.det_shifts[i]);
  add_experiment(report, e, "determinant-decay-bound", "row-column-bound");
  return report.finish();
}

int run_pf_decay(const RunConfig& config, const RunOptions& options) {
  Report report("pf-decay", config, options);
  const CurveAndFit cf = condition_fit(config, options);
  add_condition(report, cf);
  if (!cf.fitted) return report.finish();
  const DisorderModel model = config.model();
  auto configs = spread_configs(model.box, 2 * config.pf_N, config.pf_spacings);
  const auto clustered = clustered_configs(model.box, 2 * config.pf_N, config.pf_clusters);
  configs.insert(configs.end(), clustered.begin(), clustered.end());
  auto e = pfaffian_decay_experiment(model, cf.fit, configs, experiment_settings(config, options));
  for (std::size_t i = 0; i < e.points.size(); ++i) {
    e.points[i].label = i < config.pf_spacings.size()
                            ? "spread " + std::to_string(config.pf_spacings[i])
                            : "clustered " + std::to_string(config.pf_clusters[i - config.pf_spacings.size()]);
  }
  add_experiment(report, e, "pfaffian-decay-bound", "pfaffian-row-sum-bound");
  return report.finish();
}

int run_hadamard(const RunConfig& config, const RunOptions& options) {
  Report report("hadamard", config, options);
  HadamardSuiteOptions h;
  h.pairs = config.hadamard_pairs;
  h.beta = config.beta;
  h.convexity_tol = config.convexity_tol;
  h.boundary_tol = config.boundary_tol;
  for (const auto& c : hadamard_suite({config.seed, options.threads}, h)) report.check(c);
  return report.finish();
}

int run_plot_data(const RunOptions& options) {
  const std::filesystem::path dir(options.out_dir);
  std::ifstream csv(dir / "curve.csv");
  std::ifstream rep(dir / "report.json");
  if (!csv || !rep) {
    std::cerr << "plot-data: need curve.csv and report.json in " << dir.string() << '\n';
    return kUsage;
  }
  const json doc = json::parse(rep);
  const bool has_fit = doc.contains("fit") && !doc["fit"].is_null();
  const double amplitude = has_fit ? doc["fit"]["amplitude"].get<double>() : 0.0;
  const double rate = has_fit ? doc["fit"]["rate"].get<double>() : 0.0;
  const bool experiment = doc.contains("experiment");

  std::ofstream dat(dir / "curve.dat");
  std::string line;
  std::getline(csv, line);
  dat << "# " << line << (has_fit ? ",model" : "") << '\n';
  std::size_t row = 0;
  while (std::getline(csv, line)) {
    if (line.empty()) continue;
    std::istringstream in(line);
    std::string x, mean, se, n;
    std::getline(in, x, ',');
    std::getline(in, mean, ',');
    std::getline(in, se, ',');
    std::getline(in, n, ',');
    dat << x << ' ' << mean << ' ' << se << ' ' << n;
    if (has_fit) {
      const double bound = experiment ? doc["experiment"]["points"][row]["bound"].get<double>()
                                      : amplitude * std::exp(-rate * std::stod(x));
      dat << ' ' << g17(bound);
    }
    dat << '\n';
    ++row;
  }
  std::ofstream gp(dir / "plot.gp");
  gp << "set logscale y\nset xlabel 'distance'\nset ylabel 'mean'\n"
     << "plot 'curve.dat' using 1:2:3 with yerrorbars title 'estimate'"
     << (has_fit ? ", '' using 1:5 with lines title 'bound'" : "") << '\n';
  std::cout << "wrote " << (dir / "curve.dat").string() << " and " << (dir / "plot.gp").string() << '\n';
  return kPass;
}

}  // namespace qfd::cli
