#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "qfd/errors.hpp"
#include "qfd/lattice.hpp"

namespace {

using qfd::Configuration;
using qfd::Point;

// Independent double loop over the Euclidean distance raised to eps.
double brute_hausdorff(const Configuration& a, const Configuration& b, double eps) {
  auto dist = [eps](const Point& x, const Point& y) {
    double sq = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) sq += double(x[i] - y[i]) * double(x[i] - y[i]);
    return std::pow(std::sqrt(sq), eps);
  };
  auto directed = [&](const Configuration& p, const Configuration& q) {
    double worst = 0.0;
    for (const auto& x : p) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& y : q) best = std::min(best, dist(x, y));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

Configuration random_config(std::mt19937_64& rng, std::size_t n, int d, int range) {
  std::uniform_int_distribution<int> coord(-range, range);
  std::vector<Point> pts;
  while (pts.size() < n) {
    Point p(d);
    for (auto& c : p) c = coord(rng);
    if (std::find(pts.begin(), pts.end(), p) == pts.end()) pts.push_back(p);
  }
  return Configuration(pts);
}

TEST(PowerMetric, CoincidentPointsAreAtZero) {
  EXPECT_EQ(qfd::power_metric({3, -1}, {3, -1}, 0.4), 0.0);
}

TEST(PowerMetric, Examples) {
  EXPECT_DOUBLE_EQ(qfd::power_metric({0}, {2}, 1.0), 2.0);
  EXPECT_NEAR(qfd::power_metric({0, 0}, {3, 4}, 0.5), std::sqrt(5.0), 1e-14);
}

TEST(PowerMetric, RejectsEpsilonOutsideUnitInterval) {
  EXPECT_THROW(qfd::power_metric({0}, {1}, 0.0), qfd::ParameterError);
  EXPECT_THROW(qfd::power_metric({0}, {1}, 1.5), qfd::ParameterError);
  EXPECT_THROW(qfd::power_metric({0}, {1, 2}, 1.0), qfd::ParameterError);
}

TEST(Hausdorff, Examples) {
  auto x = Configuration::line({0, 3});
  EXPECT_EQ(qfd::hausdorff_distance(x, x, 0.7), 0.0);
  EXPECT_DOUBLE_EQ(qfd::hausdorff_distance(x, Configuration::line({1}), 1.0), 2.0);
}

TEST(Hausdorff, MatchesDoubleLoop) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    int d = 1 + trial % 3;
    auto a = random_config(rng, 1 + trial % 6, d, 8);
    auto b = random_config(rng, 1 + (trial / 6) % 6, d, 8);
    double eps = 0.1 + 0.9 * (trial % 10) / 9.0;
    EXPECT_NEAR(qfd::hausdorff_distance(a, b, eps), brute_hausdorff(a, b, eps), 1e-12);
  }
}

TEST(Hausdorff, IsAPseudometric) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    auto a = random_config(rng, 3, 2, 6);
    auto b = random_config(rng, 4, 2, 6);
    auto c = random_config(rng, 2, 2, 6);
    double eps = 0.5;
    double ab = qfd::hausdorff_distance(a, b, eps);
    EXPECT_DOUBLE_EQ(ab, qfd::hausdorff_distance(b, a, eps));
    EXPECT_LE(qfd::hausdorff_distance(a, c, eps),
              ab + qfd::hausdorff_distance(b, c, eps) + 1e-12);
  }
}

TEST(Symmetrized, Examples) {
  auto x = Configuration::line({0, 3});
  EXPECT_EQ(qfd::symmetrized_distance(x, x, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(qfd::symmetrized_distance(x, Configuration::line({1, 2}), 1.0), 1.0);
}

TEST(Symmetrized, DominatesHausdorff) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + trial % 5;
    auto a = random_config(rng, n, 1 + trial % 2, 10);
    auto b = random_config(rng, n, 1 + trial % 2, 10);
    EXPECT_GE(qfd::symmetrized_distance(a, b, 0.8) + 1e-12, qfd::hausdorff_distance(a, b, 0.8));
  }
}

TEST(Symmetrized, RejectsSizeMismatchAndCap) {
  EXPECT_THROW(qfd::symmetrized_distance(Configuration::line({0, 1}), Configuration::line({0}), 1.0),
               qfd::ParameterError);
  std::vector<Point> big;
  for (int i = 0; i < 9; ++i) big.push_back({i});
  Configuration c(big);
  EXPECT_THROW(qfd::symmetrized_distance(c, c, 1.0), qfd::ResourceError);
}

TEST(SplittingWidth, Examples) {
  EXPECT_DOUBLE_EQ(qfd::splitting_width(Configuration::line({0, 1, 10, 11}), 1.0), 1.0);
  EXPECT_DOUBLE_EQ(qfd::splitting_width(Configuration::line({0, 5}), 1.0), 5.0);
  EXPECT_THROW(qfd::splitting_width(Configuration::line({4}), 1.0), qfd::ParameterError);
}

// Every bipartition of X satisfies l(X) <= d(X1, X2).
TEST(SplittingWidth, BoundedByEveryBipartition) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 100; ++trial) {
    auto x = random_config(rng, 2 + trial % 5, 1 + trial % 2, 7);
    double width = qfd::splitting_width(x, 0.6);
    std::size_t n = x.size();
    for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << n); ++mask) {
      std::vector<Point> p, q;
      for (std::size_t i = 0; i < n; ++i) ((mask >> i) & 1 ? p : q).push_back(x[i]);
      EXPECT_LE(width, qfd::hausdorff_distance(Configuration(p), Configuration(q), 0.6) + 1e-12);
    }
  }
}

TEST(Configuration, RejectsDuplicatesAndMixedDimensions) {
  EXPECT_THROW(Configuration::line({1, 1}), qfd::ParameterError);
  EXPECT_THROW(Configuration(std::vector<Point>{{0}, {0, 1}}), qfd::ParameterError);
  EXPECT_THROW(Configuration(std::vector<Point>{}), qfd::ParameterError);
}

TEST(Box, IndexingRoundTrips) {
  qfd::Box box(2, 5, 2);
  EXPECT_EQ(box.one_particle_dimension(), 50u);
  for (std::size_t i = 0; i < box.sites(); ++i) EXPECT_EQ(box.site_index(box.site(i)), i);
  EXPECT_EQ(box.index({1, 0}, 1), 3u);
  EXPECT_EQ(box.center(), (Point{2, 2}));
  EXPECT_FALSE(box.contains({5, 0}));
}

}  // namespace
