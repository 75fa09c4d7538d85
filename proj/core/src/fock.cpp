#include "qfd/fock.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "qfd/errors.hpp"
#include "qfd/pfadet.hpp"

namespace qfd {

namespace {

double jw_sign(std::size_t state, std::size_t mode) {
  const std::size_t below = state & ((std::size_t{1} << mode) - 1);
  return std::popcount(below) % 2 == 0 ? 1.0 : -1.0;
}

// X = sum_m cre_m b_m^* + ann_m b_m in the eigenmode occupation basis.
struct ModeOperator {
  CVector cre;
  CVector ann;
};

ModeOperator mode_operator(const HermitianOperator& h, Flavor flavor, const CVector& phi,
                           const ComplexTime& z) {
  const auto n = h.dimension();
  ModeOperator op{CVector::Zero(n), CVector::Zero(n)};
  if (flavor != Flavor::annihilation) {
    op.cre = h.to_eigenbasis(evolve({phi, z, Flavor::creation, 0}, h));
  }
  if (flavor != Flavor::creation) {
    op.ann = h.to_eigenbasis(evolve({phi, z, Flavor::annihilation, 0}, h)).conjugate();
  }
  return op;
}

void apply(const ModeOperator& op, const CVector& in, CVector& out) {
  out.setZero();
  const auto modes = static_cast<std::size_t>(op.cre.size());
  for (std::size_t s = 0; s < static_cast<std::size_t>(in.size()); ++s) {
    const cplx amp = in[static_cast<Eigen::Index>(s)];
    if (amp == cplx{}) continue;
    for (std::size_t m = 0; m < modes; ++m) {
      const std::size_t bit = std::size_t{1} << m;
      const double sign = jw_sign(s, m);
      const auto mi = static_cast<Eigen::Index>(m);
      if (s & bit) {
        out[static_cast<Eigen::Index>(s ^ bit)] += sign * op.ann[mi] * amp;
      } else {
        out[static_cast<Eigen::Index>(s | bit)] += sign * op.cre[mi] * amp;
      }
    }
  }
}

// Normalised Gibbs weights of the eigenmode occupation states.
std::vector<double> gibbs_weights(const HermitianOperator& h, double beta) {
  const RVector& lambda = h.eigenvalues();
  const auto modes = static_cast<std::size_t>(lambda.size());
  double ground = 0.0;
  for (Eigen::Index m = 0; m < lambda.size(); ++m) ground += std::min(0.0, lambda[m]);
  std::vector<double> w(std::size_t{1} << modes);
  double z = 0.0;
  for (std::size_t s = 0; s < w.size(); ++s) {
    double e = 0.0;
    for (std::size_t m = 0; m < modes; ++m)
      if (s & (std::size_t{1} << m)) e += lambda[static_cast<Eigen::Index>(m)];
    w[s] = std::exp(-beta * (e - ground));
    z += w[s];
  }
  for (auto& x : w) x /= z;
  return w;
}

cplx expectation_of(const std::vector<ModeOperator>& ops, const std::vector<double>& weights) {
  const auto dim = static_cast<Eigen::Index>(weights.size());
  CVector v(dim), scratch(dim);
  cplx acc{};
  for (Eigen::Index s = 0; s < dim; ++s) {
    v.setZero();
    v[s] = 1.0;
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
      apply(*it, v, scratch);
      v.swap(scratch);
    }
    acc += weights[static_cast<std::size_t>(s)] * v[s];
  }
  return acc;
}

void require_positive_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ParameterError("beta must be positive");
}

}  // namespace

FockRep::FockRep(HermitianOperator h) : h_(std::move(h)), modes_(static_cast<std::size_t>(h_.dimension())) {
  if (modes_ > kMaxFockModes) {
    throw ResourceError("Fock oracle limited to " + std::to_string(kMaxFockModes) + " modes, got " +
                        std::to_string(modes_));
  }
  const auto dim = static_cast<Eigen::Index>(dimension());
  for (std::size_t k = 0; k < modes_; ++k) {
    std::vector<Eigen::Triplet<cplx>> entries;
    const std::size_t bit = std::size_t{1} << k;
    for (std::size_t s = 0; s < dimension(); ++s) {
      if (s & bit) {
        entries.emplace_back(static_cast<Eigen::Index>(s ^ bit), static_cast<Eigen::Index>(s),
                             cplx(jw_sign(s, k), 0.0));
      }
    }
    SparseCMatrix a(dim, dim);
    a.setFromTriplets(entries.begin(), entries.end());
    annihilators_.push_back(std::move(a));
  }
}

SparseCMatrix FockRep::annihilation(const CVector& phi) const {
  if (static_cast<std::size_t>(phi.size()) != modes_) throw ParameterError("vector dimension mismatch");
  SparseCMatrix out(annihilators_.front().rows(), annihilators_.front().cols());
  for (std::size_t k = 0; k < modes_; ++k) out += std::conj(phi[static_cast<Eigen::Index>(k)]) * annihilators_[k];
  return out;
}

SparseCMatrix FockRep::creation(const CVector& phi) const {
  if (static_cast<std::size_t>(phi.size()) != modes_) throw ParameterError("vector dimension mismatch");
  SparseCMatrix out(annihilators_.front().rows(), annihilators_.front().cols());
  for (std::size_t k = 0; k < modes_; ++k) out += phi[static_cast<Eigen::Index>(k)] * creator(k);
  return out;
}

SparseCMatrix FockRep::second_quantize(const CMatrix& a) const {
  if (static_cast<std::size_t>(a.rows()) != modes_ || a.rows() != a.cols()) {
    throw ParameterError("one-particle operator dimension mismatch");
  }
  SparseCMatrix out(annihilators_.front().rows(), annihilators_.front().cols());
  for (std::size_t j = 0; j < modes_; ++j)
    for (std::size_t k = 0; k < modes_; ++k) {
      const cplx c = a(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
      if (c != cplx{}) out += c * SparseCMatrix(creator(j) * annihilators_[k]);
    }
  return out;
}

FockRep build_fock(const HermitianOperator& h) { return FockRep(h); }

double car_residual(const FockRep& rep) {
  double worst = 0.0;
  const auto dim = static_cast<Eigen::Index>(rep.dimension());
  SparseCMatrix id(dim, dim);
  id.setIdentity();
  auto max_abs = [](const SparseCMatrix& m) {
    double r = 0.0;
    for (int k = 0; k < m.outerSize(); ++k)
      for (SparseCMatrix::InnerIterator it(m, k); it; ++it) r = std::max(r, std::abs(it.value()));
    return r;
  };
  for (std::size_t j = 0; j < rep.modes(); ++j) {
    for (std::size_t k = 0; k < rep.modes(); ++k) {
      const SparseCMatrix& aj = rep.annihilator(j);
      const SparseCMatrix& ak = rep.annihilator(k);
      const SparseCMatrix akd = rep.creator(k);
      SparseCMatrix mixed = aj * akd + akd * aj;
      if (j == k) mixed -= id;
      worst = std::max(worst, max_abs(mixed));
      worst = std::max(worst, max_abs(SparseCMatrix(aj * ak + ak * aj)));
    }
  }
  return worst;
}

OrderedMonomial OrderedMonomial::in_order(std::vector<MonomialFactor> factors) {
  OrderedMonomial m;
  m.positions.resize(factors.size());
  for (std::size_t k = 0; k < factors.size(); ++k) m.positions[k] = k;
  m.factors = std::move(factors);
  return m;
}

void OrderedMonomial::validate() const {
  if (positions.size() != factors.size()) throw ParameterError("one position per factor required");
  std::vector<bool> used(positions.size(), false);
  for (std::size_t p : positions) {
    if (p >= positions.size() || used[p]) throw ParameterError("positions must form a permutation");
    used[p] = true;
  }
}

int OrderedMonomial::sign() const {
  validate();
  return permutation_sign(positions);
}

cplx product_expectation(const FockRep& rep, double beta, std::span<const MonomialFactor> factors) {
  require_positive_beta(beta);
  const HermitianOperator& h = rep.hamiltonian();
  std::vector<ModeOperator> ops;
  ops.reserve(factors.size());
  for (const auto& f : factors) ops.push_back(mode_operator(h, f.flavor, f.phi, f.z));
  return expectation_of(ops, gibbs_weights(h, beta));
}

namespace {

std::vector<MonomialFactor> in_position_order(std::span<const MonomialFactor> factors,
                                              std::span<const std::size_t> positions) {
  std::vector<MonomialFactor> ordered(factors.size());
  for (std::size_t k = 0; k < factors.size(); ++k) ordered[positions[k]] = factors[k];
  return ordered;
}

}  // namespace

cplx gibbs_expectation(const FockRep& rep, double beta, const OrderedMonomial& monomial) {
  const int sign = monomial.sign();
  for (const auto& f : monomial.factors) require_in_strip(f.z, beta);
  const auto ordered = in_position_order(monomial.factors, monomial.positions);
  return static_cast<double>(sign) * product_expectation(rep, beta, ordered);
}

namespace {

std::vector<MonomialFactor> chained_product(std::span<const MonomialFactor> factors,
                                            std::span<const std::size_t> positions,
                                            std::span<const cplx> xi) {
  const std::size_t m = factors.size();
  if (positions.size() != m || xi.size() != m) throw ParameterError("chained expectation size mismatch");
  OrderedMonomial check{{factors.begin(), factors.end()}, {positions.begin(), positions.end()}};
  check.validate();
  auto ordered = in_position_order(factors, positions);
  // position p (0-based) carries xi_1 + ... + xi_{m-p}
  std::vector<cplx> prefix(m + 1);
  for (std::size_t i = 0; i < m; ++i) prefix[i + 1] = prefix[i] + xi[i];
  for (std::size_t p = 0; p < m; ++p) ordered[p].z = ComplexTime::from_complex(prefix[m - p]);
  return ordered;
}

}  // namespace

cplx chained_expectation(const FockRep& rep, double beta, std::span<const MonomialFactor> factors,
                         std::span<const std::size_t> positions, std::span<const cplx> xi) {
  const auto ordered = chained_product(factors, positions, xi);
  for (const auto& f : ordered) require_in_strip(f.z, beta);
  return product_expectation(rep, beta, ordered);
}

WickCheck wick_determinant_check(const FockRep& rep, double beta, std::span<const CVector> phis,
                                 std::span<const ComplexTime> times,
                                 std::span<const std::size_t> label_positions) {
  const std::size_t two_n = phis.size();
  if (two_n == 0 || two_n % 2 != 0) throw ParameterError("need 2N vectors");
  if (times.size() != two_n || label_positions.size() != two_n) throw ParameterError("size mismatch");
  const std::size_t n = two_n / 2;
  for (const auto& z : times) require_in_strip(z, beta);

  auto cre = [&](std::size_t j) { return MonomialFactor{Flavor::creation, phis[j], times[j]}; };
  auto ann = [&](std::size_t j) { return MonomialFactor{Flavor::annihilation, phis[j], times[j]}; };

  CMatrix pairs(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = 0; l < n; ++l) {
      const std::size_t c = k, a = n + l;
      cplx v;
      if (label_positions[c] < label_positions[a]) {
        const MonomialFactor f[] = {cre(c), ann(a)};
        v = product_expectation(rep, beta, f);
      } else {
        const MonomialFactor f[] = {ann(a), cre(c)};
        v = -product_expectation(rep, beta, f);
      }
      pairs(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) = v;
    }
  }

  // Argument list a*(phi_1)..a*(phi_N), a(phi_2N)..a(phi_N+1).
  OrderedMonomial mono;
  for (std::size_t i = 0; i < two_n; ++i) {
    const std::size_t label = i < n ? i : 3 * n - 1 - i;
    mono.factors.push_back(i < n ? cre(label) : ann(label));
    mono.positions.push_back(label_positions[label]);
  }
  const cplx lhs = determinant(pairs);
  const cplx rhs = gibbs_expectation(rep, beta, mono);
  return {lhs, rhs, std::abs(lhs - rhs)};
}

WickCheck wick_pfaffian_check(const FockRep& rep, double beta, std::span<const CVector> phis,
                              std::span<const ComplexTime> times, std::span<const std::size_t> positions) {
  const std::size_t two_n = phis.size();
  if (two_n == 0 || two_n % 2 != 0) throw ParameterError("need 2N vectors");
  if (times.size() != two_n || positions.size() != two_n) throw ParameterError("size mismatch");
  for (const auto& z : times) require_in_strip(z, beta);

  auto field = [&](std::size_t j) { return MonomialFactor{Flavor::field, phis[j], times[j]}; };
  const auto dim = static_cast<Eigen::Index>(two_n);
  CMatrix pairs = CMatrix::Zero(dim, dim);
  for (std::size_t k = 0; k < two_n; ++k) {
    for (std::size_t l = k + 1; l < two_n; ++l) {
      cplx v;
      if (positions[k] < positions[l]) {
        const MonomialFactor f[] = {field(k), field(l)};
        v = product_expectation(rep, beta, f);
      } else {
        const MonomialFactor f[] = {field(l), field(k)};
        v = -product_expectation(rep, beta, f);
      }
      pairs(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) = v;
      pairs(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(k)) = -v;
    }
  }
  OrderedMonomial mono;
  for (std::size_t j = 0; j < two_n; ++j) mono.factors.push_back(field(j));
  mono.positions.assign(positions.begin(), positions.end());
  const cplx lhs = pfaffian(pairs);
  const cplx rhs = gibbs_expectation(rep, beta, mono);
  return {lhs, rhs, std::abs(lhs - rhs)};
}

double kms_exchange_check(const FockRep& rep, double beta, std::span<const MonomialFactor> factors,
                          std::span<const std::size_t> positions, std::span<const double> t,
                          std::size_t k) {
  const std::size_t m = factors.size();
  if (t.size() != m) throw ParameterError("one real variable per factor required");
  if (k < 1 || k > m) throw ParameterError("shifted variable index out of range");
  std::vector<cplx> xi(t.begin(), t.end());
  std::vector<cplx> shifted = xi;
  shifted[k - 1] -= cplx(0.0, beta);

  const cplx lhs = chained_expectation(rep, beta, factors, positions, shifted);

  auto real_order = chained_product(factors, positions, xi);
  const std::size_t moved = m - k + 1;
  std::rotate(real_order.begin(), real_order.begin() + static_cast<std::ptrdiff_t>(moved % m), real_order.end());
  const cplx rhs = product_expectation(rep, beta, real_order);
  return std::abs(lhs - rhs);
}

}  // namespace qfd
