#include "qfd/verification.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>

#include <Eigen/Eigenvalues>

#include "qfd/fock.hpp"
#include "qfd/hadamard.hpp"
#include "qfd/kernels.hpp"
#include "qfd/lattice.hpp"
#include "qfd/operators.hpp"
#include "qfd/pfadet.hpp"
#include "qfd/sampling.hpp"

namespace qfd {

namespace {

std::string format(const char* fmt, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, fmt, a, b);
  return buf;
}

class Tally {
 public:
  Tally(std::string name, double tolerance) {
    r_.name = std::move(name);
    r_.tolerance = tolerance;
  }

  /// Records one trial whose discrepancy must not exceed `allowed`.
  void add(double discrepancy, double allowed) {
    ++r_.trials;
    if (!(discrepancy <= allowed)) {
      ++r_.failures;
      r_.passed = false;
    }
    if (!(discrepancy <= r_.worst)) r_.worst = discrepancy;
  }
  void add(double discrepancy) { add(discrepancy, r_.tolerance); }

  CheckResult done(std::string detail = {}) {
    r_.detail = std::move(detail);
    return r_;
  }

 private:
  CheckResult r_;
};

Configuration random_configuration(Sampler& rng, std::size_t size, int dim, std::set<Point>& used) {
  std::vector<Point> pts;
  while (pts.size() < size) {
    Point p(static_cast<std::size_t>(dim));
    for (auto& c : p) c = rng.integer(-8, 8);
    if (used.insert(p).second) pts.push_back(p);
  }
  return Configuration(std::move(pts));
}

Configuration random_configuration(Sampler& rng, std::size_t size, int dim) {
  std::set<Point> used;
  return random_configuration(rng, size, dim, used);
}

Configuration join(const Configuration& a, const Configuration& b) {
  std::vector<Point> pts = a.points();
  pts.insert(pts.end(), b.begin(), b.end());
  return Configuration(std::move(pts));
}

CMatrix fermi_matrix(const HermitianOperator& h, double beta) {
  return apply_function(h, [&](double l) { return cplx(fermi_factor(beta, l)); });
}

std::uint64_t stream(const SuiteOptions& o, std::uint64_t salt) { return o.seed * 0x9E3779B97F4A7C15ULL + salt; }

}  // namespace

std::vector<CheckResult> lattice_checks(const SuiteOptions& options) {
  Sampler rng(stream(options, 1));
  constexpr double tol = 1e-12;
  Tally symmetric("hausdorff-symmetry", tol), identity("hausdorff-identity", tol),
      triangle("hausdorff-triangle", tol), unions("hausdorff-union", tol),
      symmetrized("hausdorff-below-symmetrized", tol), splitting("splitting-below-symmetrized", tol);
  for (int trial = 0; trial < 300; ++trial) {
    const int dim = rng.integer(1, 2);
    const double eps = rng.uniform(0.05, 1.0);
    const auto n = static_cast<std::size_t>(rng.integer(1, 6));
    const auto a = random_configuration(rng, n, dim);
    const auto b = random_configuration(rng, static_cast<std::size_t>(rng.integer(1, 6)), dim);
    const auto c = random_configuration(rng, static_cast<std::size_t>(rng.integer(1, 6)), dim);
    const double ab = hausdorff_distance(a, b, eps), ba = hausdorff_distance(b, a, eps);
    symmetric.add(std::abs(ab - ba));
    identity.add(hausdorff_distance(a, a, eps));
    const double ac = hausdorff_distance(a, c, eps), bc = hausdorff_distance(b, c, eps);
    triangle.add(std::max(0.0, ac - (ab + bc)));

    std::set<Point> used_x, used_y;
    const auto x1 = random_configuration(rng, n, dim, used_x);
    const auto x2 = random_configuration(rng, n, dim, used_x);
    const auto y1 = random_configuration(rng, n, dim, used_y);
    const auto y2 = random_configuration(rng, n, dim, used_y);
    const double joint = hausdorff_distance(join(x1, x2), join(y1, y2), eps);
    unions.add(std::max(0.0, joint - std::max(hausdorff_distance(x1, y1, eps), hausdorff_distance(x2, y2, eps))));

    const double sym = symmetrized_distance(x1, x2, eps);
    symmetrized.add(std::max(0.0, hausdorff_distance(x1, x2, eps) - sym));
    splitting.add(std::max(0.0, splitting_width(join(x1, x2), eps) - sym));
  }
  return {symmetric.done(), identity.done(), triangle.done(), unions.done(), symmetrized.done(),
          splitting.done()};
}

std::vector<CheckResult> operator_checks(const SuiteOptions& options) {
  Sampler rng(stream(options, 2));
  Tally fermi("fermi-factor-vs-extended-precision", 1e-12);
  for (int i = 0; i <= 1400; ++i) {
    const double x = -700.0 + i;
    const double beta = rng.uniform(0.1, 10.0);
    const double lambda = x / beta;
    const long double ref = 1.0L / (1.0L + std::exp(static_cast<long double>(beta) * static_cast<long double>(lambda)));
    const double got = fermi_factor(beta, lambda);
    fermi.add(static_cast<double>(std::abs((static_cast<long double>(got) - ref) / ref)));
  }

  Tally symbol("propagator-symbol-bounded-by-one", 1e-12);
  for (int k = 0; k < 2000; ++k) {
    const double beta = rng.uniform(0.1, 10.0);
    const ComplexTime z = rng.strip_time(beta, 50.0, 0.3);
    const double lambda = rng.uniform(-50.0, 50.0);
    symbol.add(std::max(0.0, std::abs(propagator_symbol(z, beta, EnergyWindow::full(), lambda)) - 1.0));
  }

  Tally propagator("propagator-at-zero-is-fermi-operator", 1e-12), unitary("real-time-evolution-unitary", 1e-10);
  for (int k = 0; k < 50; ++k) {
    const auto n = static_cast<std::size_t>(rng.integer(1, 16));
    const double beta = rng.uniform(0.2, 5.0);
    const HermitianOperator h(rng.hermitian(n, rng.uniform(0.5, 5.0)));
    const CMatrix w = weighted_propagator(h, {}, beta, EnergyWindow::full());
    double err = (w - w.adjoint()).cwiseAbs().maxCoeff();
    const Eigen::SelfAdjointEigenSolver<CMatrix> es((w + w.adjoint()) * 0.5);
    err = std::max(err, std::max(0.0, -es.eigenvalues().minCoeff()));
    err = std::max(err, std::max(0.0, es.eigenvalues().maxCoeff() - 1.0));
    propagator.add(err);
    const CVector phi = rng.unit_vector(n);
    const ComplexTime t{rng.uniform(-20.0, 20.0), 0.0};
    unitary.add(std::abs(evolve({phi, t, Flavor::creation, 0}, h).norm() - 1.0));
    unitary.add(std::abs(evolve({phi, t, Flavor::annihilation, 0}, h).norm() - 1.0));
  }
  return {fermi.done(), symbol.done(), propagator.done(), unitary.done()};
}

std::vector<CheckResult> kernel_checks(const SuiteOptions& options) {
  Sampler rng(stream(options, 3));
  Tally defining("G-real-equal-times-defining-form", 1e-12), norm("G-bounded-by-norms", 1e-12),
      field_norm("field-G-bounded-by-norms", 1e-12), antisym("field-G-antisymmetry", 1e-10),
      oracle("G-vs-fock-oracle", 1e-9), field_oracle("field-G-vs-fock-oracle", 1e-9);
  for (int k = 0; k < 200; ++k) {
    const auto n = static_cast<std::size_t>(rng.integer(1, 6));
    // the oracle evolves each factor separately, so beta * ||H|| is kept moderate
    const double beta = rng.uniform(0.2, 2.0);
    const HermitianOperator h(rng.hermitian(n, rng.uniform(0.5, 2.0)));
    const CVector p1 = rng.unit_vector(n), p2 = rng.unit_vector(n);
    const double t = rng.uniform(-5.0, 5.0);
    const cplx g0 = two_point_G(h, beta, {p1, {t, 0.0}, Flavor::creation, 0}, {p2, {t, 0.0}, Flavor::annihilation, 0});
    defining.add(std::abs(g0 - p2.dot(fermi_matrix(h, beta) * p1)));

    const ComplexTime z1 = rng.strip_time(beta, 5.0, 0.3), z2 = rng.strip_time(beta, 5.0, 0.3);
    const DressedVector c1{p1, z1, Flavor::creation, 0}, a2{p2, z2, Flavor::annihilation, 0};
    const cplx g = two_point_G(h, beta, c1, a2);
    norm.add(std::max(0.0, std::abs(g) - 1.0));
    const int q1 = rng.integer(0, 1), q2 = rng.integer(0, 1);
    const DressedVector f1{p1, z1, Flavor::field, q1}, f2{p2, z2, Flavor::field, q2};
    const cplx gf = two_point_field_G(h, beta, f1, f2);
    field_norm.add(std::max(0.0, std::abs(gf) - 1.0));
    if (z1.imag() != z2.imag()) antisym.add(std::abs(gf + two_point_field_G(h, beta, f2, f1)));

    const FockRep rep(h);
    const auto ord = time_order(z1, z2);
    const MonomialFactor mc{Flavor::creation, p1, z1}, ma{Flavor::annihilation, p2, z2};
    OrderedMonomial mono{{mc, ma}, {0, 1}};
    if (ord.order == Order::second_then_first) mono.positions = {1, 0};
    oracle.add(std::abs(g - gibbs_expectation(rep, beta, mono)));
    OrderedMonomial fmono{{{Flavor::field, f1.vector(), z1}, {Flavor::field, f2.vector(), z2}}, mono.positions};
    field_oracle.add(std::abs(gf - gibbs_expectation(rep, beta, fmono)));
  }
  return {defining.done(), norm.done(), field_norm.done(), antisym.done(), oracle.done(), field_oracle.done()};
}

CheckResult wick_determinant_suite(const SuiteOptions& options, std::size_t draws) {
  Sampler rng(stream(options, 4));
  Tally tally("wick-determinant", 1e-9);
  std::size_t ordering_failures = 0;
  for (std::size_t d = 0; d < draws; ++d) {
    const auto n = static_cast<std::size_t>(rng.integer(2, 6));
    const auto N = static_cast<std::size_t>(rng.integer(1, 3));
    const double beta = rng.coin() ? 0.5 : 2.0;
    const HermitianOperator h(rng.hermitian(n, 2.0));
    std::vector<CVector> phis;
    std::vector<ComplexTime> times;
    for (std::size_t k = 0; k < 2 * N; ++k) {
      phis.push_back(rng.unit_vector(n));
      times.push_back(rng.strip_time(beta, 5.0, 0.25));
    }
    const auto pos = choose_ordering_permutation(times, OrderingMode::determinant);
    if (!satisfies_pair_ordering(times, pos)) ++ordering_failures;

    std::vector<DressedVector> rows, cols;
    for (std::size_t k = 0; k < N; ++k) {
      rows.push_back({phis[k], times[k], Flavor::creation, 0});
      cols.push_back({phis[N + k], times[N + k], Flavor::annihilation, 0});
    }
    const cplx det = determinant(kernel_matrix(h, beta, rows, cols).values);
    const FockRep rep(h);
    const WickCheck w = wick_determinant_check(rep, beta, phis, times, pos);
    const double scale = std::max(1.0, std::abs(w.rhs));
    tally.add(std::max(std::abs(det - w.rhs), w.discrepancy) / scale);
  }
  for (std::size_t i = 0; i < ordering_failures; ++i) tally.add(1.0);
  return tally.done(ordering_failures == 0 ? "ordering permutation satisfied the pair condition on every draw"
                                           : "ordering permutation violated the pair condition");
}

CheckResult wick_pfaffian_suite(const SuiteOptions& options, std::size_t draws) {
  Sampler rng(stream(options, 5));
  Tally tally("wick-pfaffian", 1e-9);
  for (std::size_t d = 0; d < draws; ++d) {
    const auto n = static_cast<std::size_t>(rng.integer(2, 6));
    const auto N = static_cast<std::size_t>(rng.integer(1, 3));
    const double beta = rng.coin() ? 0.5 : 2.0;
    const HermitianOperator h(rng.hermitian(n, 2.0));
    std::vector<DressedVector> vecs;
    std::vector<CVector> dressed;
    std::vector<ComplexTime> times;
    for (std::size_t k = 0; k < 2 * N; ++k) {
      vecs.push_back({rng.unit_vector(n), rng.strip_time(beta, 5.0, 0.25), Flavor::field, rng.integer(0, 1)});
      dressed.push_back(vecs.back().vector());
      times.push_back(vecs.back().z);
    }
    const auto pos = choose_ordering_permutation(times, OrderingMode::pfaffian);
    const cplx pf = pfaffian(skew_kernel_matrix(h, beta, vecs).values);
    const FockRep rep(h);
    const WickCheck w = wick_pfaffian_check(rep, beta, dressed, times, pos);
    const double scale = std::max(1.0, std::abs(w.rhs));
    tally.add(std::max(std::abs(pf - w.rhs), w.discrepancy) / scale);
  }
  return tally.done();
}

BoundSuite kernel_bound_suite(const SuiteOptions& options, std::size_t trials) {
  Sampler rng(stream(options, 6));
  Tally det_u("det-universal-bound", 1.0 + 1e-10), pf_u("pf-universal-bound", 1.0 + 1e-10),
      det_rc("det-row-column-bound", 0.0), pf_row("pf-row-sum-bound", 0.0);
  for (std::size_t t = 0; t < trials; ++t) {
    const auto n = static_cast<std::size_t>(rng.integer(1, 32));
    const auto N = static_cast<std::size_t>(rng.integer(1, 6));
    const double beta = rng.uniform(0.1, 5.0);
    const HermitianOperator h(rng.hermitian(n, rng.uniform(0.5, 5.0)));
    std::vector<DressedVector> rows, cols, fields;
    for (std::size_t k = 0; k < N; ++k) {
      rows.push_back({rng.unit_vector(n), rng.strip_time(beta, 20.0, 0.25), Flavor::creation, 0});
      cols.push_back({rng.unit_vector(n), rng.strip_time(beta, 20.0, 0.25), Flavor::annihilation, 0});
    }
    for (std::size_t k = 0; k < 2 * N; ++k) {
      fields.push_back({rng.unit_vector(n), rng.strip_time(beta, 20.0, 0.25), Flavor::field, rng.integer(0, 1)});
    }
    const KernelMatrix km = kernel_matrix(h, beta, rows, cols);
    const SkewKernelMatrix sk = skew_kernel_matrix(h, beta, fields);
    det_u.add(universal_bound_check(km).ratio);
    pf_u.add(universal_bound_check(sk).ratio);
    const RowColumnBound rc = det_row_column_bound(km);
    det_rc.add(std::max(0.0, rc.value - rc.bound), bound_tolerance(rc.bound));
    for (std::size_t row = 1; row <= 2 * N; ++row) {
      const RowSumBound rs = pf_row_sum_bound(sk, row);
      pf_row.add(std::max(0.0, rs.value - rs.bound), bound_tolerance(rs.bound));
    }
  }
  return {det_u.done("worst = largest |det| / prod ||phi||"), pf_u.done("worst = largest |Pf| / prod ||phi||"),
          det_rc.done("worst = largest excess of |det| over the smallest row/column sum"),
          pf_row.done("worst = largest excess of |Pf| over a row sum")};
}

std::vector<CheckResult> pfaffian_numerics_suite(const SuiteOptions& options) {
  Sampler rng(stream(options, 7));
  Tally square("pf-squared-equals-det", 1e-8), methods("pf-stable-vs-combinatorial", 1e-9),
      det_lap("det-laplace-expansions", 1e-9), pf_lap("pf-laplace-expansions", 1e-9),
      swap("pf-row-swap-antisymmetry", 1e-10), empty("pf-empty-matrix", 0.0);
  for (Eigen::Index dim = 2; dim <= 12; dim += 2) {
    for (int k = 0; k < 10; ++k) {
      const CMatrix m = rng.skew(static_cast<std::size_t>(dim));
      const cplx pf = pfaffian(m);
      const cplx det = determinant(m);
      square.add(std::abs(pf * pf - det) / std::abs(det));

      const auto i = static_cast<Eigen::Index>(rng.integer(0, static_cast<int>(dim) - 1));
      auto j = static_cast<Eigen::Index>(rng.integer(0, static_cast<int>(dim) - 2));
      if (j >= i) ++j;
      CMatrix s = m;
      s.row(i).swap(s.row(j));
      s.col(i).swap(s.col(j));
      swap.add(std::abs(pfaffian(s) + pf) / std::abs(pf));
    }
  }
  for (Eigen::Index dim = 2; dim <= kMaxCombinatorialPfaffian; dim += 2) {
    const int reps = dim == kMaxCombinatorialPfaffian ? 1 : 5;
    for (int k = 0; k < reps; ++k) {
      const CMatrix m = rng.skew(static_cast<std::size_t>(dim));
      const cplx a = pfaffian(m), b = pfaffian(m, PfaffianMethod::combinatorial);
      methods.add(std::abs(a - b) / std::abs(b));
    }
  }
  for (int k = 0; k < 20; ++k) {
    CMatrix g(6, 6);
    for (auto& x : g.reshaped()) x = rng.complex_normal();
    const auto dr = determinant_expansions(g);
    det_lap.add(dr.max_discrepancy / std::max(1.0, std::abs(dr.direct)));
    const auto pr = pfaffian_expansions(rng.skew(6));
    pf_lap.add(pr.max_discrepancy / std::max(1.0, std::abs(pr.direct)));
  }
  empty.add(std::abs(pfaffian(CMatrix(0, 0)) - 1.0));
  return {square.done(), methods.done(), det_lap.done(), pf_lap.done(), swap.done(), empty.done()};
}

std::vector<CheckResult> oracle_fidelity_suite(const SuiteOptions& options, std::size_t draws) {
  Sampler rng(stream(options, 8));
  Tally defining("oracle-defining-relation", 1e-10), reversed("oracle-aa*-closed-form", 1e-10),
      car("car-residuals", 1e-12), gauge("gauge-invariance", 1e-12), kms("kms-exchange", 1e-9),
      dgamma("oracle-vs-second-quantized-trace", 1e-10);
  for (std::size_t d = 0; d < draws; ++d) {
    const auto n = static_cast<std::size_t>(rng.integer(1, 6));
    const double beta = rng.uniform(0.2, 5.0);
    const HermitianOperator h(rng.hermitian(n, rng.uniform(0.5, 3.0)));
    const CVector p1 = rng.unit_vector(n), p2 = rng.unit_vector(n);
    const FockRep rep(h);
    const MonomialFactor c1{Flavor::creation, p1, {}}, a2{Flavor::annihilation, p2, {}};
    const MonomialFactor a1{Flavor::annihilation, p1, {}}, c2{Flavor::creation, p2, {}};
    const CMatrix f = fermi_matrix(h, beta);
    defining.add(std::abs(gibbs_expectation(rep, beta, OrderedMonomial::in_order({c1, a2})) - p2.dot(f * p1)));
    const CMatrix g = apply_function(h, [&](double l) { return cplx(fermi_factor(-beta, l)); });
    reversed.add(std::abs(gibbs_expectation(rep, beta, OrderedMonomial::in_order({a1, c2})) - p1.dot(g * p2)));

    // gauge: odd products and unequal creation/annihilation counts
    const MonomialFactor c3{Flavor::creation, rng.unit_vector(n), rng.strip_time(beta, 3.0)};
    gauge.add(std::abs(gibbs_expectation(rep, beta, OrderedMonomial::in_order({c1}))));
    gauge.add(std::abs(gibbs_expectation(rep, beta, OrderedMonomial::in_order({c1, c3}))));
    gauge.add(std::abs(gibbs_expectation(rep, beta, OrderedMonomial::in_order({c1, a2, c3}))));
    gauge.add(std::abs(gibbs_expectation(rep, beta, OrderedMonomial::in_order({a1, a2}))));
    if (d < 60) car.add(car_residual(rep));
  }
  car.add(car_residual(FockRep(HermitianOperator(rng.hermitian(kMaxFockModes)))));

  // KMS cyclic exchange on the chained product structure
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 4;
    const double beta = rng.uniform(0.3, 3.0);
    const HermitianOperator h(rng.hermitian(n, 2.0));
    const FockRep rep(h);
    const std::size_t m = trial % 2 == 0 ? 2 : 4;
    std::vector<MonomialFactor> factors;
    for (std::size_t k = 0; k < m; ++k) {
      factors.push_back({k < m / 2 ? Flavor::creation : Flavor::annihilation, rng.unit_vector(n), {}});
    }
    std::vector<std::size_t> positions(m);
    std::iota(positions.begin(), positions.end(), std::size_t{0});
    std::shuffle(positions.begin(), positions.end(), rng.engine());
    std::vector<double> t(m);
    for (auto& x : t) x = rng.uniform(-3.0, 3.0);
    for (std::size_t k = 1; k <= m; ++k) kms.add(kms_exchange_check(rep, beta, factors, positions, t, k));
  }

  // traces with the explicitly second-quantized Hamiltonian at real times
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 4;
    const double beta = rng.uniform(0.3, 3.0);
    const HermitianOperator h(rng.hermitian(n, 2.0));
    const FockRep rep(h);
    const CMatrix H = CMatrix(rep.second_quantize(h.matrix()));
    const Eigen::SelfAdjointEigenSolver<CMatrix> es(H);
    const RVector e = es.eigenvalues();
    const double e0 = e.minCoeff();
    auto fock_fn = [&](auto&& fn) {
      CMatrix d = CMatrix::Zero(H.rows(), H.cols());
      for (Eigen::Index i = 0; i < e.size(); ++i) d(i, i) = fn(e[i]);
      return CMatrix(es.eigenvectors() * d * es.eigenvectors().adjoint());
    };
    const CMatrix gibbs = fock_fn([&](double x) { return cplx(std::exp(-beta * (x - e0))); });
    const cplx z = gibbs.trace();
    std::vector<MonomialFactor> factors;
    CMatrix product = CMatrix::Identity(H.rows(), H.cols());
    for (int k = 0; k < 4; ++k) {
      const Flavor fl = k % 2 == 0 ? Flavor::creation : Flavor::annihilation;
      const CVector phi = rng.unit_vector(n);
      const double t = rng.uniform(-3.0, 3.0);
      factors.push_back({fl, phi, {t, 0.0}});
      const CMatrix op = CMatrix(fl == Flavor::creation ? rep.creation(phi) : rep.annihilation(phi));
      const CMatrix u = fock_fn([&](double x) { return std::exp(cplx(0.0, t * x)); });
      product = product * (u * op * u.adjoint());
    }
    const cplx direct = (gibbs * product).trace() / z;
    dgamma.add(std::abs(direct - gibbs_expectation(rep, beta, OrderedMonomial::in_order(factors))));
  }
  return {defining.done(), reversed.done(), car.done(), gauge.done(), kms.done(), dgamma.done()};
}

std::vector<CheckResult> hadamard_suite(const SuiteOptions& options, const HadamardSuiteOptions& ho) {
  Sampler rng(stream(options, 9));
  const std::size_t modes = 4, arity = 4;
  const double beta = ho.beta;
  const HermitianOperator h(rng.integer_spectrum_hermitian(modes, 2));
  std::vector<CVector> phis;
  std::vector<ComplexTime> times;
  for (std::size_t k = 0; k < arity; ++k) {
    phis.push_back(rng.unit_vector(modes));
    times.push_back(rng.strip_time(beta, 5.0));
  }
  const Upsilon ups(h, beta, phis, choose_ordering_permutation(times, OrderingMode::determinant));

  Tally fast("upsilon-wick-vs-oracle", 1e-9);
  for (int k = 0; k < 40; ++k) {
    const SimplexPoint s = sample_simplex(arity, beta, rng.engine());
    std::vector<cplx> xi;
    for (double sj : s.s) xi.emplace_back(rng.uniform(-5.0, 5.0), sj);
    fast.add(std::abs(ups(xi) - ups.oracle(xi)));
  }

  const TubeFunction tube = ups.tube();
  const TimeGrid grid = TimeGrid::uniform(arity, ho.span_factor * beta, ho.spacing_factor * beta, true);
  SupOptions sup;
  sup.refine_starts = ho.refine_starts;
  sup.threads = std::max<std::size_t>(1, options.threads);

  std::vector<std::pair<SimplexPoint, SimplexPoint>> pairs;
  for (std::size_t p = 0; p < ho.pairs; ++p) {
    SimplexPoint a = sample_simplex(arity, beta, rng.engine());
    SimplexPoint b = sample_simplex(arity, beta, rng.engine());
    pairs.emplace_back(std::move(a), std::move(b));
  }
  const double alphas[] = {0.5};
  const ConvexityReport conv = convexity_check(tube, pairs, alphas, grid, ho.convexity_tol, sup);
  CheckResult convexity;
  convexity.name = "hadamard-midpoint-convexity";
  convexity.passed = conv.passed;
  convexity.worst = conv.worst_violation;
  convexity.tolerance = ho.convexity_tol;
  convexity.trials = pairs.size();
  convexity.failures = conv.passed ? 0 : 1;
  convexity.detail = format("grid span %g, spacing %g", conv.grid_span, conv.grid_spacing) +
                     format(", worst pair %g, sup evaluations %g", static_cast<double>(conv.worst_pair),
                            static_cast<double>(conv.evaluations));

  std::vector<SimplexPoint> interior;
  for (std::size_t k = 0; k < ho.interior_samples; ++k) interior.push_back(sample_simplex(arity, beta, rng.engine()));
  const auto boundary = boundary_vertices(arity, beta);
  const BoundaryMaxReport bm = boundary_max_check(tube, interior, boundary, grid, ho.boundary_tol, sup);
  CheckResult bmax;
  bmax.name = "hadamard-boundary-maximum";
  bmax.passed = bm.passed;
  bmax.worst = std::max(bm.interior_max - bm.boundary_max, bm.boundary_max - bm.bound);
  bmax.tolerance = ho.boundary_tol;
  bmax.trials = interior.size() + boundary.size();
  bmax.failures = bm.passed ? 0 : 1;
  bmax.detail = format("interior max %.12g, boundary max %.12g", bm.interior_max, bm.boundary_max) +
                format(", bound %.12g, grid span %g", bm.bound, bm.grid_span);
  return {fast.done(), convexity, bmax};
}

std::vector<CheckResult> verify_all(const SuiteOptions& options) {
  std::vector<CheckResult> out;
  auto append = [&](std::vector<CheckResult> v) { out.insert(out.end(), v.begin(), v.end()); };
  append(lattice_checks(options));
  append(operator_checks(options));
  append(kernel_checks(options));
  append(pfaffian_numerics_suite(options));
  const BoundSuite b = kernel_bound_suite(options);
  append({b.det_universal, b.pf_universal, b.det_row_column, b.pf_row_sum});
  out.push_back(wick_determinant_suite(options));
  out.push_back(wick_pfaffian_suite(options));
  append(oracle_fidelity_suite(options));
  return out;
}

}  // namespace qfd
