#include "qfd/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "qfd/errors.hpp"
#include "qfd/kernels.hpp"
#include "qfd/parallel.hpp"
#include "qfd/pfadet.hpp"

namespace qfd {

namespace {

constexpr std::uint64_t kTimesStream = 0x74696D6573ULL;
constexpr std::uint64_t kAssignmentStream = 0x61737367ULL;

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

void require_positive_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ParameterError("beta must be positive");
}

}  // namespace

std::vector<ComplexTime> ZGrid::points(double beta) const {
  validate();
  require_positive_beta(beta);
  std::vector<ComplexTime> out;
  const auto steps = static_cast<std::size_t>(std::floor(t_span / t_step + 1e-9));
  for (double f : s_fractions)
    for (std::size_t i = 0; i <= steps; ++i) out.push_back({static_cast<double>(i) * t_step, f * beta});
  return out;
}

void ZGrid::validate() const {
  if (!(t_span >= 0.0) || !std::isfinite(t_span)) throw ParameterError("z grid t_span must be >= 0");
  if (!(t_step > 0.0) || !std::isfinite(t_step)) throw ParameterError("z grid t_step must be positive");
  if (s_fractions.empty()) throw ParameterError("z grid needs at least one s level");
  for (double f : s_fractions)
    if (!(f >= 0.0 && f <= 1.0)) throw ParameterError("z grid s levels must lie in [0, 1] (fractions of beta)");
}

std::vector<CurvePoint> condition_local_curve(const DisorderModel& model, const Point& x1,
                                              const CurveSettings& settings) {
  model.validate();
  require_positive_beta(settings.beta);
  require_epsilon(settings.eps);
  if (settings.R_grid.empty()) throw ParameterError("R grid is empty");
  if (!std::is_sorted(settings.R_grid.begin(), settings.R_grid.end())) {
    throw ParameterError("R grid must be ascending");
  }
  const Box& box = model.box;
  if (!box.contains(x1)) throw ParameterError("x1 lies outside the box");
  const auto zs = settings.z_grid.points(settings.beta);

  const auto spins = box.spins();
  std::vector<double> distance(box.sites());
  for (std::size_t site = 0; site < box.sites(); ++site) distance[site] = power_metric(x1, box.site(site), settings.eps);

  const VectorEstimator estimator = [&](const DisorderSample& sample) {
    const HermitianOperator& h = sample.hamiltonian();
    const auto& sp = h.spectrum();
    const auto n = h.dimension();
    std::vector<double> w(box.sites(), 0.0);
    CVector g(n), c(n), v(n);
    for (const auto& z : zs) {
      for (Eigen::Index m = 0; m < n; ++m) g[m] = propagator_symbol(z, settings.beta, settings.window, sp.eigenvalues[m]);
      for (int s1 = 0; s1 < spins; ++s1) {
        const auto i1 = static_cast<Eigen::Index>(box.index(x1, s1));
        c = g.cwiseProduct(sp.eigenvectors.row(i1).adjoint());
        v.noalias() = sp.eigenvectors * c;
        for (std::size_t site = 0; site < box.sites(); ++site)
          for (int s2 = 0; s2 < spins; ++s2) {
            const auto i2 = static_cast<Eigen::Index>(site * static_cast<std::size_t>(spins) + static_cast<std::size_t>(s2));
            w[site] = std::max(w[site], std::abs(v[i2]));
          }
      }
    }
    std::vector<double> tails(settings.R_grid.size(), 0.0);
    for (std::size_t r = 0; r < tails.size(); ++r)
      for (std::size_t site = 0; site < box.sites(); ++site)
        if (distance[site] >= settings.R_grid[r]) tails[r] += w[site];
    return tails;
  };

  const auto estimates = expectation(model, estimator, settings.samples, settings.threads);
  std::vector<CurvePoint> out;
  for (std::size_t r = 0; r < estimates.size(); ++r) out.push_back({settings.R_grid[r], estimates[r]});
  return out;
}

DecayFit fit_decay(std::span<const double> R, std::span<const double> y) {
  if (R.size() != y.size()) throw ParameterError("fit needs one value per R");
  std::vector<double> xs, ls;
  for (std::size_t i = 0; i < R.size(); ++i) {
    if (y[i] > 0.0 && std::isfinite(y[i]) && std::isfinite(R[i])) {
      xs.push_back(R[i]);
      ls.push_back(std::log(y[i]));
    }
  }
  const std::size_t n = xs.size();
  if (n < 3) throw FitError("decay fit needs at least three positive points, got " + std::to_string(n));
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ls[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ls[i] - my);
    syy += (ls[i] - my) * (ls[i] - my);
  }
  if (sxx == 0.0) throw FitError("decay fit needs at least two distinct R values");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ls[i] - (intercept + slope * xs[i]);
    ssr += r * r;
  }
  DecayFit fit;
  fit.amplitude = std::exp(intercept);
  fit.rate = -slope;
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ssr / syy, 0.0, 1.0) : 1.0;
  fit.rate_stderr = std::sqrt(ssr / static_cast<double>(n - 2) / sxx);
  fit.R_min = *std::min_element(xs.begin(), xs.end());
  fit.R_max = *std::max_element(xs.begin(), xs.end());
  fit.points = n;
  return fit;
}

DecayFit fit_decay(std::span<const CurvePoint> curve) {
  std::vector<double> R, y;
  for (const auto& p : curve) {
    R.push_back(p.R);
    y.push_back(p.estimate.mean);
  }
  return fit_decay(R, y);
}

TimeScheme parse_time_scheme(const std::string& name) {
  if (name == "real") return TimeScheme::real;
  if (name == "boundary") return TimeScheme::boundary;
  if (name == "strip") return TimeScheme::strip;
  throw ParameterError("unknown time scheme '" + name + "' (expected real, boundary or strip)");
}

std::string to_string(TimeScheme scheme) {
  switch (scheme) {
    case TimeScheme::real: return "real";
    case TimeScheme::boundary: return "boundary";
    default: return "strip";
  }
}

std::vector<ComplexTime> sample_times(std::size_t count, double beta, TimeScheme scheme,
                                      double t_range, std::uint64_t seed, std::size_t index) {
  require_positive_beta(beta);
  std::mt19937_64 rng(sample_stream_key(seed ^ kTimesStream, index));
  std::vector<ComplexTime> out(count);
  for (auto& z : out) {
    z.t = (2.0 * uniform01(rng) - 1.0) * t_range;
    const double u = uniform01(rng);
    switch (scheme) {
      case TimeScheme::real: z.s = 0.0; break;
      case TimeScheme::boundary: z.s = u < 0.5 ? 0.0 : beta; break;
      case TimeScheme::strip: z.s = u * beta; break;
    }
  }
  return out;
}

namespace {

Point along_first_axis(const Box& box, int coordinate) {
  Point p = box.center();
  p[0] = coordinate;
  return p;
}

Configuration line_config(const Box& box, const std::vector<int>& xs) {
  std::vector<Point> pts;
  for (int x : xs) {
    const Point p = along_first_axis(box, x);
    if (!box.contains(p)) throw ParameterError("configuration does not fit in the box");
    pts.push_back(p);
  }
  return Configuration(std::move(pts));
}

}  // namespace

std::vector<PairConfig> block_pair_configs(const Box& box, std::size_t n, std::span<const int> shifts) {
  if (n == 0) throw ParameterError("block size must be positive");
  std::vector<PairConfig> out;
  for (int shift : shifts) {
    if (shift < 1) throw ParameterError("block shift must be at least 1");
    const int extent = static_cast<int>(n) + shift;
    const int start = (box.side() - extent) / 2;
    std::vector<int> a, b;
    for (int k = 0; k < static_cast<int>(n); ++k) {
      a.push_back(start + k);
      b.push_back(start + k + shift);
    }
    out.push_back({line_config(box, a), line_config(box, b)});
  }
  return out;
}

std::vector<Configuration> spread_configs(const Box& box, std::size_t two_n, std::span<const int> spacings) {
  if (two_n < 2) throw ParameterError("need at least two points");
  std::vector<Configuration> out;
  for (int g : spacings) {
    if (g < 1) throw ParameterError("spacing must be at least 1");
    const int extent = g * static_cast<int>(two_n - 1) + 1;
    const int start = (box.side() - extent) / 2;
    std::vector<int> xs;
    for (std::size_t k = 0; k < two_n; ++k) xs.push_back(start + g * static_cast<int>(k));
    out.push_back(line_config(box, xs));
  }
  return out;
}

std::vector<Configuration> clustered_configs(const Box& box, std::size_t two_n,
                                             std::span<const int> separations) {
  if (two_n < 2 || two_n % 2 != 0) throw ParameterError("clusters need an even number of points");
  std::vector<Configuration> out;
  for (int sep : separations) {
    if (sep < 2) throw ParameterError("cluster separation must be at least 2");
    const int pairs = static_cast<int>(two_n / 2);
    const int extent = sep * (pairs - 1) + 2;
    const int start = (box.side() - extent) / 2;
    std::vector<int> xs;
    for (int k = 0; k < pairs; ++k) {
      xs.push_back(start + sep * k);
      xs.push_back(start + sep * k + 1);
    }
    out.push_back(line_config(box, xs));
  }
  return out;
}

namespace {

// Assignments of `slots` digits, each in [0, radix): all of them, or
// kMaxAssignments deterministic draws.
struct Assignments {
  std::vector<std::vector<int>> digits;
  bool exhaustive = true;
};

Assignments make_assignments(std::size_t slots, int radix, bool exhaustive, std::uint64_t key) {
  Assignments a;
  a.exhaustive = exhaustive;
  if (exhaustive) {
    std::size_t total = 1;
    for (std::size_t i = 0; i < slots; ++i) total *= static_cast<std::size_t>(radix);
    for (std::size_t code = 0; code < total; ++code) {
      std::vector<int> d(slots);
      std::size_t c = code;
      for (auto& x : d) {
        x = static_cast<int>(c % static_cast<std::size_t>(radix));
        c /= static_cast<std::size_t>(radix);
      }
      a.digits.push_back(std::move(d));
    }
  } else {
    std::mt19937_64 rng(key);
    for (std::size_t k = 0; k < kMaxAssignments; ++k) {
      std::vector<int> d(slots);
      for (auto& x : d) x = static_cast<int>(rng() % static_cast<std::uint64_t>(radix));
      a.digits.push_back(std::move(d));
    }
  }
  return a;
}

struct SampleOutcome {
  std::vector<double> values;  // one per configuration
  std::size_t checks = 0;
  std::size_t failures = 0;
};

using ConfigEvaluator = std::function<double(const DisorderSample&, std::size_t, SampleOutcome&)>;

std::vector<SampleOutcome> run_samples(const DisorderModel& model, std::size_t begin, std::size_t end,
                                       std::size_t configs, std::size_t threads,
                                       const ConfigEvaluator& eval,
                                       const std::vector<bool>& active) {
  std::vector<SampleOutcome> out(end - begin);
  parallel_for(end - begin, std::max<std::size_t>(1, threads), [&](std::size_t i) {
    const std::size_t index = begin + i;
    try {
      DisorderSample sample(model, index);
      SampleOutcome& o = out[i];
      o.values.assign(configs, 0.0);
      for (std::size_t c = 0; c < configs; ++c)
        if (active[c]) o.values[c] = eval(sample, c, o);
    } catch (const SampleError&) {
      throw;
    } catch (const std::exception& e) {
      throw SampleError(index, e.what());
    }
  });
  return out;
}

void finish_report(ExperimentReport& report, const DisorderModel& model, const ExperimentSettings& settings,
                   std::size_t configs, const ConfigEvaluator& eval) {
  std::vector<bool> all(configs, true);
  const auto first = run_samples(model, 0, settings.samples, configs, settings.threads, eval, all);
  std::vector<std::vector<double>> per_config(configs);
  for (const auto& o : first) {
    for (std::size_t c = 0; c < configs; ++c) per_config[c].push_back(o.values[c]);
    report.deterministic_checks += o.checks;
    report.deterministic_failures += o.failures;
  }
  std::vector<bool> flagged(configs, false);
  for (std::size_t c = 0; c < configs; ++c) {
    auto& p = report.points[c];
    p.estimate = summarize(per_config[c]);
    p.flagged = p.estimate.mean - 2.0 * p.estimate.std_error > p.bound;
    flagged[c] = p.flagged;
  }
  const std::size_t widened = settings.samples * std::max<std::size_t>(1, settings.widen_factor);
  if (std::find(flagged.begin(), flagged.end(), true) != flagged.end() && widened > settings.samples) {
    const auto more = run_samples(model, settings.samples, widened, configs, settings.threads, eval, flagged);
    for (const auto& o : more) {
      for (std::size_t c = 0; c < configs; ++c)
        if (flagged[c]) per_config[c].push_back(o.values[c]);
      report.deterministic_checks += o.checks;
      report.deterministic_failures += o.failures;
    }
  }
  for (std::size_t c = 0; c < configs; ++c) {
    auto& p = report.points[c];
    if (p.flagged) {
      p.estimate = summarize(per_config[c]);
      p.violated = p.estimate.mean - 2.0 * p.estimate.std_error > p.bound;
    }
    if (p.violated) ++report.violations;
  }
  report.deterministic_pass_rate =
      report.deterministic_checks == 0
          ? 1.0
          : 1.0 - static_cast<double>(report.deterministic_failures) / static_cast<double>(report.deterministic_checks);
}

void validate_experiment(const DisorderModel& model, const DecayFit& fit, const ExperimentSettings& settings) {
  model.validate();
  require_positive_beta(settings.beta);
  require_epsilon(settings.eps);
  if (settings.samples < 2) throw ParameterError("need at least two disorder samples");
  if (!(fit.amplitude > 0.0) || !std::isfinite(fit.amplitude) || !std::isfinite(fit.rate)) {
    throw ParameterError("decay fit must have a positive, finite amplitude and a finite rate");
  }
  if (!(settings.safety_factor >= 1.0)) throw ParameterError("safety factor must be at least 1");
}

}  // namespace

ExperimentReport corollary_decay_experiment(const DisorderModel& model, const DecayFit& fit,
                                            std::span<const PairConfig> configs,
                                            const ExperimentSettings& settings) {
  validate_experiment(model, fit, settings);
  if (configs.empty()) throw ParameterError("configuration sampler produced no pairs");
  const Box& box = model.box;
  const std::size_t n = configs.front().first.size();
  for (const auto& pc : configs) {
    if (pc.first.size() != n || pc.second.size() != n) throw ParameterError("all pairs must have |X1| = |X2| = N");
  }

  ExperimentReport report;
  report.kind = "det-decay";
  report.fit = fit;
  report.constant = settings.safety_factor * fit.amplitude;
  report.samples = settings.samples;
  report.seed = model.seed;

  const auto spins = box.spins();
  const bool exhaustive = 2 * n * static_cast<std::size_t>(spins) <= 12;
  const auto assign = make_assignments(2 * n, spins, exhaustive, sample_stream_key(model.seed ^ kAssignmentStream, 0));
  std::vector<std::vector<ComplexTime>> times;
  for (std::size_t c = 0; c < configs.size(); ++c) {
    times.push_back(sample_times(2 * n, settings.beta, settings.times, settings.t_range, model.seed, c));
    DistancePoint p;
    p.distance = hausdorff_distance(configs[c].first, configs[c].second, settings.eps);
    p.bound = report.constant * std::exp(-fit.rate * p.distance);
    p.combos = assign.digits.size();
    p.exhaustive = assign.exhaustive;
    report.points.push_back(p);
  }

  const ConfigEvaluator eval = [&](const DisorderSample& sample, std::size_t c, SampleOutcome& o) {
    const HermitianOperator& h = sample.hamiltonian();
    std::vector<SiteSpin> first(n), second(n);
    double best = 0.0;
    for (const auto& d : assign.digits) {
      for (std::size_t k = 0; k < n; ++k) {
        first[k] = {configs[c].first[k], d[k]};
        second[k] = {configs[c].second[k], d[n + k]};
      }
      const KernelMatrix m = assemble_G_matrix(h, settings.beta, settings.window, box, first, second, times[c]);
      const RowColumnBound b = det_row_column_bound(m);
      ++o.checks;
      if (!b.satisfied) ++o.failures;
      best = std::max(best, b.value);
    }
    return best;
  };
  finish_report(report, model, settings, configs.size(), eval);
  return report;
}

ExperimentReport pfaffian_decay_experiment(const DisorderModel& model, const DecayFit& fit,
                                           std::span<const Configuration> configs,
                                           const ExperimentSettings& settings) {
  validate_experiment(model, fit, settings);
  if (configs.empty()) throw ParameterError("configuration sampler produced no configurations");
  const Box& box = model.box;
  const std::size_t two_n = configs.front().size();
  if (two_n < 2 || two_n % 2 != 0) throw ParameterError("Pfaffian configurations need 2N points");
  for (const auto& x : configs)
    if (x.size() != two_n) throw ParameterError("all configurations must have the same size");

  ExperimentReport report;
  report.kind = "pf-decay";
  report.fit = fit;
  report.constant = settings.safety_factor * fit.amplitude;
  report.samples = settings.samples;
  report.seed = model.seed;

  const auto spins = box.spins();
  const bool exhaustive = two_n * static_cast<std::size_t>(spins) <= 12;
  // digit = 2 * spin + phase
  const auto assign = make_assignments(two_n, 2 * spins, exhaustive,
                                       sample_stream_key(model.seed ^ kAssignmentStream, 1));
  std::vector<std::vector<ComplexTime>> times;
  for (std::size_t c = 0; c < configs.size(); ++c) {
    times.push_back(sample_times(two_n, settings.beta, settings.times, settings.t_range, model.seed, c));
    DistancePoint p;
    p.distance = splitting_width(configs[c], settings.eps);
    p.bound = 2.0 * report.constant * std::exp(-fit.rate * p.distance);
    p.combos = assign.digits.size();
    p.exhaustive = assign.exhaustive;
    report.points.push_back(p);
  }

  const ConfigEvaluator eval = [&](const DisorderSample& sample, std::size_t c, SampleOutcome& o) {
    const HermitianOperator& h = sample.hamiltonian();
    std::vector<SiteSpin> sites(two_n);
    std::vector<int> phases(two_n);
    double best = 0.0;
    for (const auto& d : assign.digits) {
      for (std::size_t k = 0; k < two_n; ++k) {
        sites[k] = {configs[c][k], d[k] / 2};
        phases[k] = d[k] % 2;
      }
      const SkewKernelMatrix m = assemble_skew_matrix(h, settings.beta, settings.window, box, sites, phases, times[c]);
      double value = 0.0;
      for (std::size_t row = 1; row <= two_n; ++row) {
        const RowSumBound b = pf_row_sum_bound(m, row);
        ++o.checks;
        if (!b.satisfied) ++o.failures;
        value = b.value;
      }
      best = std::max(best, value);
    }
    return best;
  };
  finish_report(report, model, settings, configs.size(), eval);
  return report;
}

}  // namespace qfd
