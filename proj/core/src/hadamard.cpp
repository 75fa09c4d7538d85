#include "qfd/hadamard.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "qfd/errors.hpp"
#include "qfd/fock.hpp"
#include "qfd/kernels.hpp"
#include "qfd/parallel.hpp"
#include "qfd/pfadet.hpp"

namespace qfd {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double strip_slack(double beta) { return 1e-12 * std::max(1.0, beta); }

double log_or_neg_inf(double v) { return v > 0.0 ? std::log(v) : kNegInf; }

void require_even(std::size_t m) {
  if (m == 0 || m % 2 != 0) throw ParameterError("need an even, nonzero number of factors");
}

}  // namespace

std::vector<std::size_t> choose_ordering_permutation(std::span<const ComplexTime> times,
                                                     OrderingMode mode) {
  const std::size_t m = times.size();
  require_even(m);
  const std::size_t n = m / 2;
  std::vector<std::size_t> labels(m);
  if (mode == OrderingMode::pfaffian) {
    std::iota(labels.begin(), labels.end(), std::size_t{0});
    std::stable_sort(labels.begin(), labels.end(), [&](std::size_t a, std::size_t b) {
      return times[a].imag() < times[b].imag();
    });
  } else {
    for (std::size_t i = 0; i < m; ++i) labels[i] = i < n ? i : 3 * n - 1 - i;
    std::stable_sort(labels.begin(), labels.end(), [&](std::size_t a, std::size_t b) {
      const double ia = times[a].imag(), ib = times[b].imag();
      if (ia != ib) return ia < ib;
      return a < n && b >= n;
    });
  }
  std::vector<std::size_t> positions(m);
  for (std::size_t p = 0; p < m; ++p) positions[labels[p]] = p;
  return positions;
}

bool satisfies_pair_ordering(std::span<const ComplexTime> times,
                             std::span<const std::size_t> positions) {
  const std::size_t m = times.size();
  require_even(m);
  if (positions.size() != m) throw ParameterError("one position per time required");
  const std::size_t n = m / 2;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l) {
      const bool earlier_time = times[k].imag() <= times[n + l].imag();
      const bool earlier_slot = positions[k] < positions[n + l];
      if (earlier_time != earlier_slot) return false;
    }
  return true;
}

void SimplexPoint::validate(double beta) const {
  const double tol = strip_slack(beta);
  double sum = 0.0;
  for (double v : s) {
    if (!std::isfinite(v) || v > tol || v < -beta - tol) {
      throw ParameterError("simplex coordinate " + std::to_string(v) + " outside [-beta, 0]");
    }
    sum += v;
  }
  if (sum < -beta - tol) throw ParameterError("simplex coordinates sum below -beta");
}

bool SimplexPoint::on_boundary(double beta, double tol) const {
  auto at_end = [&](double v) { return std::abs(v) <= tol || std::abs(v + beta) <= tol; };
  return std::all_of(s.begin(), s.end(), at_end) && at_end(std::accumulate(s.begin(), s.end(), 0.0));
}

SimplexPoint sample_simplex(std::size_t n, double beta, std::mt19937_64& rng) {
  std::vector<double> e(n + 1);
  double total = 0.0;
  for (auto& x : e) {
    const double u = static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    x = -std::log(u);
    total += x;
  }
  SimplexPoint p;
  for (std::size_t j = 0; j < n; ++j) p.s.push_back(-beta * e[j] / total);
  return p;
}

std::vector<SimplexPoint> boundary_vertices(std::size_t n, double beta) {
  std::vector<SimplexPoint> out;
  out.push_back({std::vector<double>(n, 0.0)});
  for (std::size_t j = 0; j < n; ++j) {
    SimplexPoint p{std::vector<double>(n, 0.0)};
    p.s[j] = -beta;
    out.push_back(std::move(p));
  }
  return out;
}

TimeGrid TimeGrid::uniform(std::size_t arity, double span, double spacing, bool pin_first) {
  if (arity == 0) throw ParameterError("grid needs at least one axis");
  if (!(span >= 0.0) || !(spacing > 0.0)) throw ParameterError("grid span must be >= 0 and spacing > 0");
  const auto steps = static_cast<std::size_t>(std::floor(span / spacing + 1e-9));
  std::vector<double> axis;
  for (std::size_t i = 0; i <= steps; ++i) {
    axis.push_back(-0.5 * span + static_cast<double>(i) * spacing);
  }
  TimeGrid g;
  g.span = span;
  g.spacing = spacing;
  g.axes.assign(arity, axis);
  if (pin_first) g.axes[0] = {0.0};
  return g;
}

std::size_t TimeGrid::size() const {
  std::size_t n = 1;
  for (const auto& a : axes) n *= a.size();
  return n;
}

namespace {

struct Candidate {
  double value;
  std::size_t index;
};

bool better(const Candidate& a, const Candidate& b) {
  return a.value > b.value || (a.value == b.value && a.index < b.index);
}

void check_shape(const TubeFunction& f, const SimplexPoint& s, const TimeGrid& grid) {
  if (!f.f) throw ParameterError("tube function is empty");
  if (s.s.size() != f.arity || grid.axes.size() != f.arity) {
    throw ParameterError("arity mismatch between function, simplex point and grid");
  }
  for (const auto& a : grid.axes)
    if (a.empty()) throw ParameterError("grid axes must be nonempty");
  s.validate(f.beta);
}

class Evaluator {
 public:
  Evaluator(const TubeFunction& f, const SimplexPoint& s) : f_(f), s_(s), xi_(f.arity) {}

  double at(std::span<const double> t) {
    for (std::size_t j = 0; j < xi_.size(); ++j) xi_[j] = cplx(t[j], s_.s[j]);
    const cplx v = f_.f(xi_);
    const double a = std::abs(v);
    if (!std::isfinite(a)) throw NumericError("tube function returned a non-finite value");
    return a;
  }

 private:
  const TubeFunction& f_;
  const SimplexPoint& s_;
  std::vector<cplx> xi_;
};

void decode(const TimeGrid& grid, std::size_t flat, std::vector<double>& t) {
  for (std::size_t j = 0; j < grid.axes.size(); ++j) {
    const auto& a = grid.axes[j];
    t[j] = a[flat % a.size()];
    flat /= a.size();
  }
}

// Best `keep` grid points by |f|, ties broken by flat index.
std::vector<Candidate> grid_scan(const TubeFunction& f, const SimplexPoint& s, const TimeGrid& grid,
                                 std::size_t keep, std::size_t threads) {
  const std::size_t total = grid.size();
  const std::size_t chunks = std::max<std::size_t>(1, std::min(total, threads * 4));
  std::vector<std::vector<Candidate>> best(chunks);
  parallel_for(chunks, threads, [&](std::size_t c) {
    Evaluator eval(f, s);
    std::vector<double> t(grid.axes.size());
    const std::size_t begin = total * c / chunks, end = total * (c + 1) / chunks;
    auto& mine = best[c];
    for (std::size_t i = begin; i < end; ++i) {
      decode(grid, i, t);
      const Candidate cand{eval.at(t), i};
      if (mine.size() < keep) {
        mine.push_back(cand);
        std::sort(mine.begin(), mine.end(), better);
      } else if (better(cand, mine.back())) {
        mine.back() = cand;
        std::sort(mine.begin(), mine.end(), better);
      }
    }
  });
  std::vector<Candidate> merged;
  for (auto& b : best) merged.insert(merged.end(), b.begin(), b.end());
  std::sort(merged.begin(), merged.end(), better);
  if (merged.size() > keep) merged.resize(keep);
  return merged;
}

double pattern_ascent(Evaluator& eval, std::vector<double>& t, double value, double step,
                      double min_step, const std::vector<bool>& free_axis) {
  constexpr std::size_t kMaxEvaluations = 200000;
  std::size_t evaluations = 0;
  while (step >= min_step && evaluations < kMaxEvaluations) {
    bool moved = false;
    for (std::size_t j = 0; j < t.size(); ++j) {
      if (!free_axis[j]) continue;
      for (double dir : {1.0, -1.0}) {
        const double old = t[j];
        t[j] = old + dir * step;
        const double v = eval.at(t);
        ++evaluations;
        if (v > value) {
          value = v;
          moved = true;
          break;
        }
        t[j] = old;
      }
    }
    if (!moved) step *= 0.5;
  }
  return value;
}

}  // namespace

SupEstimate sup_abs(const TubeFunction& f, const SimplexPoint& s, const TimeGrid& grid,
                    const SupOptions& options) {
  check_shape(f, s, grid);
  const std::size_t threads = std::max<std::size_t>(1, options.threads);
  const auto top = grid_scan(f, s, grid, std::max<std::size_t>(1, options.refine_starts), threads);

  SupEstimate out;
  out.grid_value = top.front().value;
  out.value = out.grid_value;
  out.argmax.resize(grid.axes.size());
  decode(grid, top.front().index, out.argmax);
  if (options.refine_starts == 0 || out.grid_value == 0.0) return out;

  std::vector<bool> free_axis(grid.axes.size());
  for (std::size_t j = 0; j < free_axis.size(); ++j) free_axis[j] = grid.axes[j].size() > 1;
  const double step = grid.spacing > 0.0 ? grid.spacing : 1.0;

  std::vector<double> values(top.size());
  std::vector<std::vector<double>> points(top.size(), std::vector<double>(grid.axes.size()));
  parallel_for(top.size(), threads, [&](std::size_t k) {
    Evaluator eval(f, s);
    decode(grid, top[k].index, points[k]);
    values[k] = pattern_ascent(eval, points[k], top[k].value, step, options.min_step, free_axis);
  });
  for (std::size_t k = 0; k < top.size(); ++k) {
    if (values[k] > out.value) {
      out.value = values[k];
      out.argmax = points[k];
    }
  }
  return out;
}

double B_fn(const TubeFunction& f, const SimplexPoint& s, const TimeGrid& grid, std::size_t threads) {
  SupOptions opts;
  opts.threads = threads;
  return log_or_neg_inf(sup_abs(f, s, grid, opts).value);
}

ConvexityReport convexity_check(const TubeFunction& f,
                                std::span<const std::pair<SimplexPoint, SimplexPoint>> pairs,
                                std::span<const double> alphas, const TimeGrid& grid, double tol,
                                const SupOptions& options) {
  ConvexityReport report;
  report.grid_span = grid.span;
  report.grid_spacing = grid.spacing;
  report.worst_violation = kNegInf;
  auto B = [&](const SimplexPoint& s) {
    ++report.evaluations;
    return log_or_neg_inf(sup_abs(f, s, grid, options).value);
  };
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto& [s0, s1] = pairs[p];
    if (s0.s.size() != s1.s.size()) throw ParameterError("simplex pair arity mismatch");
    const double b0 = B(s0), b1 = B(s1);
    for (double alpha : alphas) {
      if (!(alpha >= 0.0 && alpha <= 1.0)) throw ParameterError("alpha must lie in [0, 1]");
      SimplexPoint mid{std::vector<double>(s0.s.size())};
      for (std::size_t j = 0; j < mid.s.size(); ++j) mid.s[j] = alpha * s1.s[j] + (1.0 - alpha) * s0.s[j];
      const double bm = B(mid);
      double violation;
      if (bm == kNegInf) {
        violation = kNegInf;
      } else {
        const double w1 = alpha == 0.0 ? 0.0 : alpha * b1;
        const double w0 = alpha == 1.0 ? 0.0 : (1.0 - alpha) * b0;
        const bool minus_inf = (alpha != 0.0 && b1 == kNegInf) || (alpha != 1.0 && b0 == kNegInf);
        violation = minus_inf ? std::numeric_limits<double>::infinity() : bm - (w1 + w0);
      }
      if (violation > report.worst_violation) {
        report.worst_violation = violation;
        report.worst_pair = p;
        report.worst_alpha = alpha;
      }
    }
  }
  report.passed = report.worst_violation <= tol;
  return report;
}

BoundaryMaxReport boundary_max_check(const TubeFunction& f, std::span<const SimplexPoint> interior,
                                     std::span<const SimplexPoint> boundary, const TimeGrid& grid,
                                     double tol, const SupOptions& options) {
  if (boundary.empty()) throw ParameterError("boundary samples required");
  BoundaryMaxReport r;
  r.bound = f.bound;
  r.grid_span = grid.span;
  r.grid_spacing = grid.spacing;
  SupOptions plain;
  plain.threads = options.threads;
  for (const auto& s : interior) r.interior_max = std::max(r.interior_max, sup_abs(f, s, grid, plain).value);
  for (const auto& s : boundary) {
    if (!s.on_boundary(f.beta)) throw ParameterError("boundary sample is not on the tube boundary");
    r.boundary_max = std::max(r.boundary_max, sup_abs(f, s, grid, options).value);
  }
  r.interior_below_boundary = r.interior_max <= r.boundary_max + tol;
  r.boundary_below_bound = r.boundary_max <= r.bound + tol;
  r.passed = r.interior_below_boundary && r.boundary_below_bound;
  return r;
}

Upsilon::Upsilon(HermitianOperator h, double beta, std::vector<CVector> phis,
                 std::vector<std::size_t> label_positions)
    : h_(std::move(h)), beta_(beta), phis_(std::move(phis)), positions_(std::move(label_positions)) {
  if (!(beta_ > 0.0) || !std::isfinite(beta_)) throw ParameterError("beta must be positive");
  require_even(phis_.size());
  OrderedMonomial check;
  check.factors.resize(phis_.size());
  check.positions = positions_;
  check.validate();
  for (const auto& phi : phis_) {
    if (phi.size() != h_.dimension()) throw ParameterError("vector dimension mismatch");
    coords_.push_back(h_.to_eigenbasis(phi));
  }
}

double Upsilon::norm_product() const {
  double p = 1.0;
  for (const auto& phi : phis_) p *= phi.norm();
  return p;
}

std::vector<ComplexTime> Upsilon::label_times(std::span<const cplx> xi) const {
  const std::size_t m = phis_.size();
  if (xi.size() != m) throw ParameterError("one variable per factor required");
  std::vector<cplx> prefix(m + 1);
  for (std::size_t i = 0; i < m; ++i) prefix[i + 1] = prefix[i] + xi[i];
  std::vector<ComplexTime> out(m);
  for (std::size_t label = 0; label < m; ++label) {
    out[label] = ComplexTime::from_complex(prefix[m - positions_[label]]);
    require_in_strip(out[label], beta_);
  }
  return out;
}

cplx Upsilon::operator()(std::span<const cplx> xi) const {
  const auto times = label_times(xi);
  const std::size_t n = phis_.size() / 2;
  const auto dim = static_cast<Eigen::Index>(n);
  CMatrix pairs(dim, dim);
  for (std::size_t k = 0; k < n; ++k) {
    const SpectralFactor cre{Flavor::creation, coords_[k], times[k]};
    for (std::size_t l = 0; l < n; ++l) {
      const SpectralFactor ann{Flavor::annihilation, coords_[n + l], times[n + l]};
      const Order order = positions_[k] < positions_[n + l] ? Order::first_then_second
                                                            : Order::second_then_first;
      pairs(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) =
          ordered_expectation(h_, beta_, cre, ann, order);
    }
  }
  return determinant(pairs);
}

cplx Upsilon::oracle(std::span<const cplx> xi) const {
  const auto times = label_times(xi);
  const std::size_t m = phis_.size(), n = m / 2;
  OrderedMonomial mono;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t label = i < n ? i : 3 * n - 1 - i;
    mono.factors.push_back({i < n ? Flavor::creation : Flavor::annihilation, phis_[label], times[label]});
    mono.positions.push_back(positions_[label]);
  }
  return gibbs_expectation(FockRep(h_), beta_, mono);
}

TubeFunction Upsilon::tube() const {
  TubeFunction t;
  t.f = [self = *this](std::span<const cplx> xi) { return self(xi); };
  t.arity = arity();
  t.bound = norm_product();
  t.beta = beta_;
  t.first_axis_invariant = true;
  return t;
}

cplx upsilon(const HermitianOperator& h, double beta, std::span<const CVector> phis,
             std::span<const std::size_t> label_positions, std::span<const cplx> xi) {
  const Upsilon u(h, beta, {phis.begin(), phis.end()}, {label_positions.begin(), label_positions.end()});
  return u.oracle(xi);
}

}  // namespace qfd
