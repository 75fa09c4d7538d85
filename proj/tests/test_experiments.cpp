#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "qfd/errors.hpp"
#include "qfd/experiments.hpp"
#include "qfd/kernels.hpp"
#include "qfd/lattice.hpp"
#include "qfd/sampling.hpp"

namespace {

using qfd::ComplexTime;
using qfd::DisorderModel;

DisorderModel chain(int side, double strength, std::uint64_t seed = 0) {
  DisorderModel m;
  m.box = qfd::Box(1, side, 1);
  m.strength = strength;
  m.seed = seed;
  return m;
}

TEST(FitDecay, ExactExponentialData) {
  std::vector<double> R, y;
  for (int r = 2; r <= 20; ++r) {
    R.push_back(r);
    y.push_back(2.0 * std::exp(-0.5 * r));
  }
  auto fit = qfd::fit_decay(R, y);
  EXPECT_NEAR(fit.amplitude, 2.0, 1e-10);
  EXPECT_NEAR(fit.rate, 0.5, 1e-10);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-10);
  EXPECT_EQ(fit.points, 19u);
}

TEST(FitDecay, ConstantDataHasZeroRate) {
  std::vector<double> R{1, 2, 3, 4}, y{0.3, 0.3, 0.3, 0.3};
  auto fit = qfd::fit_decay(R, y);
  EXPECT_NEAR(fit.rate, 0.0, 1e-14);
  EXPECT_NEAR(fit.amplitude, 0.3, 1e-14);
}

TEST(FitDecay, RecoversNoisyExponential) {
  qfd::Sampler rng(70);
  std::vector<double> R, y;
  for (double r = 1; r <= 30; r += 0.5) {
    R.push_back(r);
    y.push_back(5.0 * std::exp(-0.3 * r) * std::exp(0.1 * rng.normal()));
  }
  auto fit = qfd::fit_decay(R, y);
  EXPECT_NEAR(fit.rate, 0.3, 0.03);
  EXPECT_NEAR(fit.amplitude, 5.0, 0.5);
  EXPECT_GT(fit.rate_stderr, 0.0);
}

TEST(FitDecay, SkipsZerosAndNeedsThreePoints) {
  std::vector<double> R{1, 2, 3, 4}, y{1.0, 0.0, 0.25, 0.0};
  EXPECT_THROW(qfd::fit_decay(R, y), qfd::FitError);
  std::vector<double> y2{1.0, 0.0, 0.25, 0.125};
  EXPECT_EQ(qfd::fit_decay(R, y2).points, 3u);
}

TEST(ZGrid, PointsCoverRequestedLevels) {
  qfd::ZGrid grid{2.0, 0.5, {0.0, 1.0}};
  auto pts = grid.points(3.0);
  ASSERT_EQ(pts.size(), 10u);
  EXPECT_EQ(pts.front(), (ComplexTime{0.0, 0.0}));
  EXPECT_EQ(pts.back(), (ComplexTime{2.0, 3.0}));
  qfd::ZGrid bad{2.0, 0.5, {1.5}};
  EXPECT_THROW(bad.points(1.0), qfd::ParameterError);
}

// Brute-force curve from weighted propagator matrices.
TEST(ConditionCurve, MatchesDirectMatrixComputation) {
  auto model = chain(12, 3.0, 4);
  qfd::CurveSettings settings;
  settings.R_grid = {1, 2, 4, 6};
  settings.z_grid = qfd::ZGrid{3.0, 1.0, {0.0, 0.5, 1.0}};
  settings.samples = 6;
  qfd::Point x1{5};
  auto curve = qfd::condition_local_curve(model, x1, settings);
  ASSERT_EQ(curve.size(), 4u);

  std::vector<std::vector<double>> per_sample(4);
  for (std::size_t i = 0; i < settings.samples; ++i) {
    auto h = qfd::sample_hamiltonian(model, i);
    std::vector<double> sup(12, 0.0);
    for (const auto& z : settings.z_grid.points(1.0)) {
      auto p = qfd::weighted_propagator(h, z, 1.0, qfd::EnergyWindow::full());
      for (int x2 = 0; x2 < 12; ++x2) sup[x2] = std::max(sup[x2], std::abs(p(5, x2)));
    }
    for (std::size_t r = 0; r < 4; ++r) {
      double tail = 0.0;
      for (int x2 = 0; x2 < 12; ++x2)
        if (std::abs(x2 - 5) >= settings.R_grid[r]) tail += sup[x2];
      per_sample[r].push_back(tail);
    }
  }
  for (std::size_t r = 0; r < 4; ++r) {
    auto ref = qfd::summarize(per_sample[r]);
    EXPECT_NEAR(curve[r].estimate.mean, ref.mean, 1e-12);
    EXPECT_NEAR(curve[r].estimate.std_error, ref.std_error, 1e-12);
  }
}

TEST(ConditionCurve, DisjointWindowIsIdenticallyZero) {
  auto model = chain(10, 2.0);
  qfd::CurveSettings settings;
  settings.window = qfd::EnergyWindow::interval(100.0, 101.0);
  settings.R_grid = {1, 2, 3};
  settings.samples = 4;
  for (const auto& pt : qfd::condition_local_curve(model, {5}, settings)) EXPECT_EQ(pt.estimate.mean, 0.0);
}

TEST(ConditionCurve, StrongDisorderDecays) {
  auto model = chain(40, 4.0, 1);
  qfd::CurveSettings settings;
  for (int r = 2; r <= 12; ++r) settings.R_grid.push_back(r);
  settings.z_grid = qfd::ZGrid{10.0, 0.5, {0.0, 1.0}};
  settings.samples = 40;
  auto fit = qfd::fit_decay(qfd::condition_local_curve(model, {20}, settings));
  EXPECT_GT(fit.rate, 0.0);
  EXPECT_GE(fit.r_squared, 0.9);
}

TEST(SampleTimes, SchemesAndDeterminism) {
  auto real = qfd::sample_times(50, 2.0, qfd::TimeScheme::real, 5.0, 1, 3);
  for (const auto& z : real) EXPECT_EQ(z.s, 0.0);
  auto boundary = qfd::sample_times(50, 2.0, qfd::TimeScheme::boundary, 5.0, 1, 3);
  for (const auto& z : boundary) EXPECT_TRUE(z.s == 0.0 || z.s == 2.0);
  auto strip = qfd::sample_times(50, 2.0, qfd::TimeScheme::strip, 5.0, 1, 3);
  for (const auto& z : strip) {
    EXPECT_TRUE(qfd::in_strip(z, 2.0));
    EXPECT_LE(std::abs(z.t), 5.0);
  }
  EXPECT_EQ(strip, qfd::sample_times(50, 2.0, qfd::TimeScheme::strip, 5.0, 1, 3));
  EXPECT_NE(strip, qfd::sample_times(50, 2.0, qfd::TimeScheme::strip, 5.0, 1, 4));
  EXPECT_EQ(qfd::parse_time_scheme(qfd::to_string(qfd::TimeScheme::boundary)), qfd::TimeScheme::boundary);
  EXPECT_THROW(qfd::parse_time_scheme("sideways"), qfd::ParameterError);
}

TEST(Configs, BlockPairsSitAtTheirShift) {
  qfd::Box box(1, 64, 1);
  std::vector<int> shifts{1, 5, 20};
  auto pairs = qfd::block_pair_configs(box, 3, shifts);
  ASSERT_EQ(pairs.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(pairs[i].first.size(), 3u);
    EXPECT_DOUBLE_EQ(qfd::hausdorff_distance(pairs[i].first, pairs[i].second, 1.0), shifts[i]);
    for (const auto& p : pairs[i].second) EXPECT_TRUE(box.contains(p));
  }
}

TEST(Configs, SpreadAndClusteredSplittingWidths) {
  qfd::Box box(1, 64, 1);
  std::vector<int> spacings{10};
  auto spread = qfd::spread_configs(box, 4, spacings);
  EXPECT_DOUBLE_EQ(qfd::splitting_width(spread.front(), 1.0), 10.0);
  std::vector<int> seps{30};
  auto clustered = qfd::clustered_configs(box, 4, seps);
  EXPECT_DOUBLE_EQ(qfd::splitting_width(clustered.front(), 1.0), 1.0);
  EXPECT_DOUBLE_EQ(qfd::hausdorff_distance(qfd::Configuration({clustered.front()[0], clustered.front()[1]}),
                                           qfd::Configuration({clustered.front()[2], clustered.front()[3]}), 1.0),
                   30.0);
}

class SmallExperiment : public ::testing::Test {
 protected:
  void SetUp() override {
    model = chain(32, 4.0, 2);
    settings.samples = 20;
    settings.t_range = 5.0;
    qfd::CurveSettings cs;
    for (int r = 2; r <= 10; ++r) cs.R_grid.push_back(r);
    cs.z_grid = qfd::ZGrid{10.0, 0.5, {0.0, 0.5, 1.0}};
    cs.samples = 20;
    fit = qfd::fit_decay(qfd::condition_local_curve(model, {16}, cs));
  }
  DisorderModel model;
  qfd::ExperimentSettings settings;
  qfd::DecayFit fit;
};

TEST_F(SmallExperiment, DeterminantDecayHasNoViolations) {
  std::vector<int> shifts{1, 3, 6, 9};
  auto configs = qfd::block_pair_configs(model.box, 2, shifts);
  auto report = qfd::corollary_decay_experiment(model, fit, configs, settings);
  EXPECT_EQ(report.violations, 0u);
  EXPECT_EQ(report.deterministic_failures, 0u);
  EXPECT_DOUBLE_EQ(report.constant, 2.0 * fit.amplitude);
  ASSERT_EQ(report.points.size(), 4u);
  // Estimates shrink with distance.
  EXPECT_GT(report.points.front().estimate.mean, report.points.back().estimate.mean);
}

TEST_F(SmallExperiment, PfaffianDecayHasNoViolations) {
  std::vector<int> spacings{2, 4, 8};
  auto configs = qfd::spread_configs(model.box, 4, spacings);
  auto report = qfd::pfaffian_decay_experiment(model, fit, configs, settings);
  EXPECT_EQ(report.violations, 0u);
  EXPECT_EQ(report.deterministic_failures, 0u);
  for (const auto& p : report.points) EXPECT_TRUE(p.exhaustive);
}

TEST_F(SmallExperiment, ReportIndependentOfThreads) {
  std::vector<int> shifts{2, 5};
  auto configs = qfd::block_pair_configs(model.box, 2, shifts);
  auto one = qfd::corollary_decay_experiment(model, fit, configs, settings);
  settings.threads = 3;
  auto three = qfd::corollary_decay_experiment(model, fit, configs, settings);
  for (std::size_t i = 0; i < one.points.size(); ++i) {
    EXPECT_EQ(one.points[i].estimate.mean, three.points[i].estimate.mean);
    EXPECT_EQ(one.points[i].estimate.std_error, three.points[i].estimate.std_error);
  }
}

// A single pair reduces to one matrix entry: |G| between two filtered basis vectors.
TEST_F(SmallExperiment, SingleEntryDeterminantIsTwoPointFunction) {
  std::vector<int> shifts{4};
  auto configs = qfd::block_pair_configs(model.box, 1, shifts);
  settings.times = qfd::TimeScheme::real;
  auto report = qfd::corollary_decay_experiment(model, fit, configs, settings);
  std::vector<double> direct;
  for (std::size_t i = 0; i < settings.samples; ++i) {
    auto h = qfd::sample_hamiltonian(model, i);
    auto times = qfd::sample_times(2, settings.beta, settings.times, settings.t_range, model.seed, 0);
    std::vector<qfd::SiteSpin> a{{configs[0].first[0], 0}}, b{{configs[0].second[0], 0}};
    auto km = qfd::assemble_G_matrix(h, settings.beta, settings.window, model.box, a, b, times);
    direct.push_back(std::abs(km.values(0, 0)));
  }
  // Times are drawn once per configuration and shared by all samples.
  auto ref = qfd::summarize(direct);
  EXPECT_NEAR(report.points[0].estimate.mean, ref.mean, 1e-14);
}

TEST_F(SmallExperiment, DisjointWindowGivesZeroDeterminants) {
  settings.window = qfd::EnergyWindow::interval(100.0, 101.0);
  std::vector<int> shifts{2, 4};
  auto report = qfd::corollary_decay_experiment(model, fit, qfd::block_pair_configs(model.box, 2, shifts), settings);
  for (const auto& p : report.points) EXPECT_EQ(p.estimate.mean, 0.0);
  EXPECT_EQ(report.violations, 0u);
}

}  // namespace
