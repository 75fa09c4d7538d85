#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qfd/disorder.hpp"
#include "qfd/lattice.hpp"
#include "qfd/operators.hpp"

namespace qfd {

/// Complex times t - i s with t in {0, t_step, ..., t_span} and s = beta * f
/// for each fraction f in s_fractions. For the real symmetric Hamiltonians of
/// the Anderson model |<e_x, e^{izH} F e_y>| is even in t, so t >= 0 suffices.
struct ZGrid {
  double t_span = 20.0;
  double t_step = 0.5;
  std::vector<double> s_fractions{0.0, 0.5, 1.0};

  std::vector<ComplexTime> points(double beta) const;
  void validate() const;
};

struct CurvePoint {
  double R = 0.0;
  MonteCarloEstimate estimate;
};

struct CurveSettings {
  double beta = 1.0;
  EnergyWindow window = EnergyWindow::full();
  double eps = 1.0;
  std::vector<double> R_grid;
  ZGrid z_grid;
  std::size_t samples = 200;
  std::size_t threads = 1;
};

/// Disorder average of sum_{x2 : |x1 - x2|^eps >= R} sup_z max_{s1, s2}
/// |<e_{x1,s1}, e^{izH} chi_I(H) (1 + e^{beta H})^{-1} e_{x2,s2}>| for each R.
/// The sup runs over the finite z grid, a lower bound of the true sup.
std::vector<CurvePoint> condition_local_curve(const DisorderModel& model, const Point& x1,
                                              const CurveSettings& settings);

struct DecayFit {
  double amplitude = 0.0;  // D
  double rate = 0.0;       // mu
  double r_squared = 0.0;
  double rate_stderr = 0.0;
  double R_min = 0.0;
  double R_max = 0.0;
  std::size_t points = 0;
};

/// Least squares of ln y against R over the points with y > 0.
/// Throws FitError with fewer than three such points.
DecayFit fit_decay(std::span<const double> R, std::span<const double> y);
DecayFit fit_decay(std::span<const CurvePoint> curve);

enum class TimeScheme { real, boundary, strip };

TimeScheme parse_time_scheme(const std::string& name);
std::string to_string(TimeScheme scheme);

/// Deterministic times for configuration `index`: real draws s = 0, boundary
/// draws s in {0, beta}, strip draws s uniform in [0, beta]; t uniform in [-t_range, t_range].
std::vector<ComplexTime> sample_times(std::size_t count, double beta, TimeScheme scheme,
                                      double t_range, std::uint64_t seed, std::size_t index);

struct PairConfig {
  Configuration first;
  Configuration second;
};

/// A block of N consecutive sites along the first axis and its translate by
/// `shift` sites, centred in the box. Hausdorff distance shift^eps.
std::vector<PairConfig> block_pair_configs(const Box& box, std::size_t n,
                                           std::span<const int> shifts);

/// 2N equally spaced sites along the first axis with the given spacing, centred.
std::vector<Configuration> spread_configs(const Box& box, std::size_t two_n,
                                          std::span<const int> spacings);
/// N adjacent pairs whose left ends are `separation` apart, centred.
std::vector<Configuration> clustered_configs(const Box& box, std::size_t two_n,
                                             std::span<const int> separations);

struct ExperimentSettings {
  double beta = 1.0;
  EnergyWindow window = EnergyWindow::full();
  double eps = 1.0;
  std::size_t samples = 200;
  std::size_t threads = 1;
  TimeScheme times = TimeScheme::strip;
  double t_range = 10.0;
  /// D used in the bounds is safety_factor * fitted amplitude.
  double safety_factor = 2.0;
  /// Flagged points are re-estimated with this many times the samples.
  std::size_t widen_factor = 4;
};

struct DistancePoint {
  std::string label;
  double distance = 0.0;
  MonteCarloEstimate estimate;
  double bound = 0.0;
  bool flagged = false;    // mean - 2 stderr > bound at the first pass
  bool violated = false;   // still flagged after widening
  std::size_t combos = 0;  // phase/spin assignments examined per sample
  bool exhaustive = true;
};

struct ExperimentReport {
  std::string kind;
  DecayFit fit;
  double constant = 0.0;  // D in the bounds
  std::vector<DistancePoint> points;
  std::size_t violations = 0;
  std::size_t deterministic_checks = 0;
  std::size_t deterministic_failures = 0;
  double deterministic_pass_rate = 1.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

/// Largest assignment count examined exhaustively; above it this many
/// deterministic random assignments are drawn.
inline constexpr std::size_t kMaxAssignments = 4096;

/// E[max_sigma |det G|] against D e^{-mu d_eps(X1, X2)}, plus the per-sample
/// row/column bound on every examined matrix.
ExperimentReport corollary_decay_experiment(const DisorderModel& model, const DecayFit& fit,
                                            std::span<const PairConfig> configs,
                                            const ExperimentSettings& settings);

/// E[max_{p, sigma} |Pf|] against 2 D e^{-mu l_eps(X)}, plus the per-sample
/// Pfaffian row-sum bound on every examined matrix.
ExperimentReport pfaffian_decay_experiment(const DisorderModel& model, const DecayFit& fit,
                                           std::span<const Configuration> configs,
                                           const ExperimentSettings& settings);

}  // namespace qfd
