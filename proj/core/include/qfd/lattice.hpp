#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace qfd {

/// A point of Z^d.
using Point = std::vector<int>;

/// Finite box {0..L-1}^d with |S| spin components per site.
///
/// One-particle basis vectors e_{x,sigma} are indexed as
/// `site_index(x) * spins + sigma`, with `site_index` the row-major
/// linear index of x (first coordinate fastest).
class Box {
 public:
  Box(int dimension, int side, int spins = 1);

  int dimension() const noexcept { return dimension_; }
  int side() const noexcept { return side_; }
  int spins() const noexcept { return spins_; }
  std::size_t sites() const noexcept { return sites_; }
  /// n = L^d |S|
  std::size_t one_particle_dimension() const noexcept { return sites_ * spins_; }

  bool contains(const Point& x) const;
  std::size_t site_index(const Point& x) const;
  std::size_t index(const Point& x, int spin) const;
  Point site(std::size_t site_index) const;
  /// Lattice point closest to the geometric center, (L/2, ..., L/2).
  Point center() const;

 private:
  int dimension_;
  int side_;
  int spins_;
  std::size_t sites_;
};

/// Ordered list of pairwise distinct points of Z^d sharing one dimension.
class Configuration {
 public:
  explicit Configuration(std::vector<Point> points);

  std::size_t size() const noexcept { return points_.size(); }
  int dimension() const noexcept { return static_cast<int>(points_.front().size()); }
  const Point& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<Point>& points() const noexcept { return points_; }
  auto begin() const noexcept { return points_.begin(); }
  auto end() const noexcept { return points_.end(); }

  /// Convenience for d = 1.
  static Configuration line(std::initializer_list<int> xs);

 private:
  std::vector<Point> points_;
};

/// Largest N accepted by `symmetrized_distance` (N! permutations).
inline constexpr std::size_t kMaxSymmetrizedSize = 8;

/// |x - y|^eps with the Euclidean norm; eps must lie in (0, 1].
double power_metric(const Point& x, const Point& y, double eps);

/// Hausdorff distance between two point sets under the power metric.
double hausdorff_distance(const Configuration& a, const Configuration& b, double eps);

/// min over bijections of the largest paired distance, by exhaustive search.
double symmetrized_distance(const Configuration& a, const Configuration& b, double eps,
                            std::size_t cap = kMaxSymmetrizedSize);

/// max over x of the distance from x to its nearest other point. Needs |X| >= 2.
double splitting_width(const Configuration& x, double eps);

void require_epsilon(double eps);

}  // namespace qfd
