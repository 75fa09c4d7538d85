#include "qfd/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "qfd/errors.hpp"

namespace qfd {

Box::Box(int dimension, int side, int spins)
    : dimension_(dimension), side_(side), spins_(spins), sites_(1) {
  if (dimension < 1 || side < 1 || spins < 1) {
    throw ParameterError("box needs positive dimension, side length and spin count");
  }
  for (int i = 0; i < dimension; ++i) {
    if (sites_ > std::numeric_limits<std::size_t>::max() / static_cast<std::size_t>(side)) {
      throw ResourceError("box too large");
    }
    sites_ *= static_cast<std::size_t>(side);
  }
}

bool Box::contains(const Point& x) const {
  if (static_cast<int>(x.size()) != dimension_) return false;
  return std::all_of(x.begin(), x.end(), [this](int c) { return c >= 0 && c < side_; });
}

std::size_t Box::site_index(const Point& x) const {
  if (!contains(x)) throw ParameterError("point outside the box");
  std::size_t idx = 0;
  for (int i = dimension_ - 1; i >= 0; --i) {
    idx = idx * static_cast<std::size_t>(side_) + static_cast<std::size_t>(x[i]);
  }
  return idx;
}

std::size_t Box::index(const Point& x, int spin) const {
  if (spin < 0 || spin >= spins_) throw ParameterError("spin index out of range");
  return site_index(x) * static_cast<std::size_t>(spins_) + static_cast<std::size_t>(spin);
}

Point Box::site(std::size_t site_index) const {
  if (site_index >= sites_) throw ParameterError("site index out of range");
  Point x(dimension_);
  for (int i = 0; i < dimension_; ++i) {
    x[i] = static_cast<int>(site_index % static_cast<std::size_t>(side_));
    site_index /= static_cast<std::size_t>(side_);
  }
  return x;
}

Point Box::center() const { return Point(dimension_, side_ / 2); }

Configuration::Configuration(std::vector<Point> points) : points_(std::move(points)) {
  if (points_.empty()) throw ParameterError("configuration must contain at least one point");
  const auto d = points_.front().size();
  if (d == 0) throw ParameterError("points need at least one coordinate");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (points_[i].size() != d) throw ParameterError("points of mixed dimension");
    for (std::size_t j = 0; j < i; ++j) {
      if (points_[i] == points_[j]) throw ParameterError("configuration points must be distinct");
    }
  }
}

Configuration Configuration::line(std::initializer_list<int> xs) {
  std::vector<Point> pts;
  for (int x : xs) pts.push_back(Point{x});
  return Configuration(std::move(pts));
}

void require_epsilon(double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw ParameterError("epsilon must lie in (0,1]");
}

namespace {

double euclidean(const Point& x, const Point& y) {
  if (x.size() != y.size()) throw ParameterError("points of mixed dimension");
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = static_cast<double>(x[i]) - static_cast<double>(y[i]);
    sum += d * d;
  }
  return std::sqrt(sum);
}

double raw_power(const Point& x, const Point& y, double eps) {
  const double r = euclidean(x, y);
  return r == 0.0 ? 0.0 : std::pow(r, eps);
}

double directed(const Configuration& from, const Configuration& to, double eps) {
  double worst = 0.0;
  for (const auto& x : from) {
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& y : to) nearest = std::min(nearest, raw_power(x, y, eps));
    worst = std::max(worst, nearest);
  }
  return worst;
}

}  // namespace

double power_metric(const Point& x, const Point& y, double eps) {
  require_epsilon(eps);
  return raw_power(x, y, eps);
}

double hausdorff_distance(const Configuration& a, const Configuration& b, double eps) {
  require_epsilon(eps);
  return std::max(directed(a, b, eps), directed(b, a, eps));
}

double symmetrized_distance(const Configuration& a, const Configuration& b, double eps,
                            std::size_t cap) {
  require_epsilon(eps);
  if (a.size() != b.size()) throw ParameterError("configurations must have equal size");
  if (a.size() > cap) {
    throw ResourceError("symmetrized distance limited to N <= " + std::to_string(cap));
  }
  const std::size_t n = a.size();
  std::vector<double> dist(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) dist[i * n + j] = raw_power(a[i], b[j], eps);

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double worst = 0.0;
    for (std::size_t i = 0; i < n && worst < best; ++i) worst = std::max(worst, dist[i * n + perm[i]]);
    best = std::min(best, worst);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

double splitting_width(const Configuration& x, double eps) {
  require_epsilon(eps);
  if (x.size() < 2) throw ParameterError("splitting width needs at least two points");
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (j != i) nearest = std::min(nearest, raw_power(x[i], x[j], eps));
    }
    worst = std::max(worst, nearest);
  }
  return worst;
}

}  // namespace qfd
