#pragma once

#include <cstddef>
#include <functional>
#include <random>
#include <utility>
#include <span>
#include <vector>

#include "qfd/operators.hpp"

namespace qfd {

enum class OrderingMode { determinant, pfaffian };

/// Placement of 2N labelled factors (label -> 0-based position).
///
/// Determinant mode: labels 0..N-1 are creation vectors, N..2N-1 annihilation
/// vectors. The argument list a*(phi_1)..a*(phi_N) a(phi_2N)..a(phi_N+1) is
/// stably sorted by Im z, creation first on ties.
/// Pfaffian mode: labels stably sorted by Im z.
std::vector<std::size_t> choose_ordering_permutation(std::span<const ComplexTime> times,
                                                     OrderingMode mode);

/// Im z_k <= Im z_{N+l}  <=>  pos(k) < pos(N+l) for all k, l < N.
bool satisfies_pair_ordering(std::span<const ComplexTime> times,
                             std::span<const std::size_t> positions);

/// Imaginary parts (s_1..s_n) with s_j in [-beta, 0] and s_1 + ... + s_n >= -beta.
struct SimplexPoint {
  std::vector<double> s;

  void validate(double beta) const;
  bool on_boundary(double beta, double tol = 1e-12) const;
};

/// Uniform draw from the simplex K_n.
SimplexPoint sample_simplex(std::size_t n, double beta, std::mt19937_64& rng);

/// The 2N-vertex corner set of the tube boundary: all s_j = 0, or exactly one s_j = -beta.
std::vector<SimplexPoint> boundary_vertices(std::size_t n, double beta);

using TubeCallable = std::function<cplx(std::span<const cplx>)>;

struct TubeFunction {
  TubeCallable f;
  std::size_t arity = 0;
  double bound = 0.0;
  double beta = 1.0;
  /// f is unchanged by a common shift of the first argument, so that axis may be pinned.
  bool first_axis_invariant = false;
};

/// Product grid of real parts. Axis j holds the real parts tried for xi_j.
struct TimeGrid {
  std::vector<std::vector<double>> axes;
  double span = 0.0;
  double spacing = 0.0;

  /// Symmetric grid [-span/2, span/2] with the given spacing on every axis;
  /// the first axis is {0} when pinned.
  static TimeGrid uniform(std::size_t arity, double span, double spacing, bool pin_first = false);
  std::size_t size() const;
};

/// ln max_{t in grid} |f(t + i s)|, -inf when every value is zero.
/// Throws NumericError on non-finite values.
double B_fn(const TubeFunction& f, const SimplexPoint& s, const TimeGrid& grid,
            std::size_t threads = 1);

struct SupOptions {
  /// Local pattern-search ascent from the best grid points; 0 disables it.
  std::size_t refine_starts = 0;
  double min_step = 1e-10;
  std::size_t threads = 1;
};

struct SupEstimate {
  double value = 0.0;  // max |f|
  std::vector<double> argmax;
  double grid_value = 0.0;
};

/// Grid sup of |f| at fixed imaginary parts, optionally polished by local ascent.
/// The result never falls below the plain grid maximum.
SupEstimate sup_abs(const TubeFunction& f, const SimplexPoint& s, const TimeGrid& grid,
                    const SupOptions& options = {});

struct ConvexityReport {
  double worst_violation = 0.0;
  std::size_t worst_pair = 0;
  double worst_alpha = 0.0;
  std::size_t evaluations = 0;
  double grid_span = 0.0;
  double grid_spacing = 0.0;
  bool passed = true;
};

/// violation = B(alpha s' + (1 - alpha) s) - [alpha B(s') + (1 - alpha) B(s)] with
/// ln 0 = -inf and 0 * (-inf) = -inf.
ConvexityReport convexity_check(const TubeFunction& f,
                                std::span<const std::pair<SimplexPoint, SimplexPoint>> pairs,
                                std::span<const double> alphas, const TimeGrid& grid, double tol,
                                const SupOptions& options = {});

struct BoundaryMaxReport {
  double interior_max = 0.0;
  double boundary_max = 0.0;
  double bound = 0.0;
  double grid_span = 0.0;
  double grid_spacing = 0.0;
  bool interior_below_boundary = true;
  bool boundary_below_bound = true;
  bool passed = true;
};

/// Interior sups use the plain grid, boundary sups use `options` (refinement).
BoundaryMaxReport boundary_max_check(const TubeFunction& f, std::span<const SimplexPoint> interior,
                                     std::span<const SimplexPoint> boundary, const TimeGrid& grid,
                                     double tol, const SupOptions& options = {});

/// The ordered correlation of a*(phi_1)..a*(phi_N), a(phi_2N)..a(phi_N+1) where
/// the vector at position p (0-based, m = 2N factors) is evolved to
/// xi_1 + ... + xi_{m-p}. Positions are given per label.
class Upsilon {
 public:
  Upsilon(HermitianOperator h, double beta, std::vector<CVector> phis,
          std::vector<std::size_t> label_positions);

  std::size_t arity() const noexcept { return phis_.size(); }
  double beta() const noexcept { return beta_; }
  double norm_product() const;

  /// Accumulated complex time of each label.
  std::vector<ComplexTime> label_times(std::span<const cplx> xi) const;

  /// Wick determinant of the ordered pair expectations.
  cplx operator()(std::span<const cplx> xi) const;
  /// Brute-force Fock-space evaluation.
  cplx oracle(std::span<const cplx> xi) const;

  TubeFunction tube() const;

 private:
  HermitianOperator h_;
  double beta_;
  std::vector<CVector> phis_;
  std::vector<CVector> coords_;
  std::vector<std::size_t> positions_;
};

cplx upsilon(const HermitianOperator& h, double beta, std::span<const CVector> phis,
             std::span<const std::size_t> label_positions, std::span<const cplx> xi);

}  // namespace qfd
