#include "qfd/kernels.hpp"

#include <cmath>

#include "qfd/errors.hpp"

namespace qfd {

namespace {

cplx phase_factor(int p) {
  switch (((p % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

bool has_creation(Flavor f) { return f != Flavor::annihilation; }
bool has_annihilation(Flavor f) { return f != Flavor::creation; }

// <g, e^{a H} (1 + e^{beta H})^{-1} f> from eigenbasis coordinates.
cplx weighted_overlap(const RVector& lambda, double beta, cplx a, const CVector& g_hat,
                      const CVector& f_hat) {
  cplx acc{0.0, 0.0};
  for (Eigen::Index m = 0; m < lambda.size(); ++m) {
    acc += std::conj(g_hat[m]) * exp_fermi(a, lambda[m], beta) * f_hat[m];
  }
  return acc;
}

void require_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ParameterError("beta must be positive");
}

}  // namespace

CVector DressedVector::vector() const { return phase_factor(phase) * phi; }

TimeOrdering time_order(const ComplexTime& z1, const ComplexTime& z2) noexcept {
  if (z1.imag() <= z2.imag()) return {Order::first_then_second, +1};
  return {Order::second_then_first, -1};
}

CVector evolve(const DressedVector& v, const HermitianOperator& h) {
  if (v.flavor == Flavor::field) throw ParameterError("evolve expects a creation or annihilation vector");
  const auto& sp = h.spectrum();
  // creation: e^{izH}, i z = s + i t; annihilation: e^{i conj(z) H}, i conj(z) = -s + i t
  const cplx a = v.flavor == Flavor::creation ? cplx(v.z.s, v.z.t) : cplx(-v.z.s, v.z.t);
  CVector coeffs = h.to_eigenbasis(v.vector());
  for (Eigen::Index m = 0; m < coeffs.size(); ++m) coeffs[m] *= std::exp(a * sp.eigenvalues[m]);
  return h.from_eigenbasis(coeffs);
}

SpectralFactor to_spectral(const HermitianOperator& h, const DressedVector& v) {
  return {v.flavor, h.to_eigenbasis(v.vector()), v.z};
}

cplx product_expectation(const HermitianOperator& h, double beta, const SpectralFactor& first,
                         const SpectralFactor& second) {
  require_beta(beta);
  const auto& lambda = h.eigenvalues();
  const cplx dz = first.z.value() - second.z.value();
  const cplx i{0.0, 1.0};
  cplx acc{0.0, 0.0};
  // rho(a*(e^{i z1 H} f) a(e^{i conj(z2) H} g)) = <g, e^{i(z1 - z2)H} F f>
  if (has_creation(first.flavor) && has_annihilation(second.flavor)) {
    acc += weighted_overlap(lambda, beta, i * dz, second.coords, first.coords);
  }
  // rho(a(e^{i conj(z1) H} f) a*(e^{i z2 H} g)) = <f, e^{(beta + i(z2 - z1))H} F g>
  if (has_annihilation(first.flavor) && has_creation(second.flavor)) {
    acc += weighted_overlap(lambda, beta, beta - i * dz, first.coords, second.coords);
  }
  return acc;
}

cplx ordered_expectation(const HermitianOperator& h, double beta, const SpectralFactor& first,
                         const SpectralFactor& second, Order order) {
  if (order == Order::first_then_second) return product_expectation(h, beta, first, second);
  return -product_expectation(h, beta, second, first);
}

cplx two_point_G(const HermitianOperator& h, double beta, const DressedVector& left,
                 const DressedVector& right) {
  if (left.flavor != Flavor::creation || right.flavor != Flavor::annihilation) {
    throw ParameterError("two_point_G expects (creation, annihilation) vectors");
  }
  require_in_strip(left.z, beta);
  require_in_strip(right.z, beta);
  return ordered_expectation(h, beta, to_spectral(h, left), to_spectral(h, right),
                             time_order(left.z, right.z).order);
}

cplx two_point_field_G(const HermitianOperator& h, double beta, const DressedVector& left,
                       const DressedVector& right) {
  require_in_strip(left.z, beta);
  require_in_strip(right.z, beta);
  SpectralFactor a = to_spectral(h, left);
  SpectralFactor b = to_spectral(h, right);
  a.flavor = Flavor::field;
  b.flavor = Flavor::field;
  return ordered_expectation(h, beta, a, b, time_order(left.z, right.z).order);
}

std::vector<double> KernelMatrix::vector_norms() const {
  std::vector<double> out;
  for (const auto& v : rows) out.push_back(v.phi.norm());
  for (const auto& v : columns) out.push_back(v.phi.norm());
  return out;
}

std::vector<double> SkewKernelMatrix::vector_norms() const {
  std::vector<double> out;
  for (const auto& v : vectors) out.push_back(v.phi.norm());
  return out;
}

KernelMatrix kernel_matrix(const HermitianOperator& h, double beta,
                           std::span<const DressedVector> rows,
                           std::span<const DressedVector> columns) {
  if (rows.size() != columns.size() || rows.empty()) {
    throw ParameterError("kernel matrix needs N creation and N annihilation vectors, N >= 1");
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  std::vector<SpectralFactor> r, c;
  for (const auto& v : rows) {
    if (v.flavor != Flavor::creation) throw ParameterError("row vectors must have creation flavor");
    require_in_strip(v.z, beta);
    r.push_back(to_spectral(h, v));
  }
  for (const auto& v : columns) {
    if (v.flavor != Flavor::annihilation) throw ParameterError("column vectors must have annihilation flavor");
    require_in_strip(v.z, beta);
    c.push_back(to_spectral(h, v));
  }
  KernelMatrix out;
  out.values.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index l = 0; l < n; ++l)
      out.values(k, l) = ordered_expectation(h, beta, r[k], c[l], time_order(r[k].z, c[l].z).order);
  out.rows.assign(rows.begin(), rows.end());
  out.columns.assign(columns.begin(), columns.end());
  return out;
}

SkewKernelMatrix skew_kernel_matrix(const HermitianOperator& h, double beta,
                                    std::span<const DressedVector> vectors) {
  if (vectors.empty() || vectors.size() % 2 != 0) {
    throw ParameterError("skew kernel matrix needs an even, nonzero number of vectors");
  }
  const auto n = static_cast<Eigen::Index>(vectors.size());
  std::vector<SpectralFactor> f;
  for (const auto& v : vectors) {
    require_in_strip(v.z, beta);
    SpectralFactor sf = to_spectral(h, v);
    sf.flavor = Flavor::field;
    f.push_back(std::move(sf));
  }
  SkewKernelMatrix out;
  out.values = CMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index l = k + 1; l < n; ++l) {
      const cplx g = ordered_expectation(h, beta, f[k], f[l], time_order(f[k].z, f[l].z).order);
      out.values(k, l) = g;
      out.values(l, k) = -g;
    }
  }
  out.vectors.assign(vectors.begin(), vectors.end());
  for (auto& v : out.vectors) v.flavor = Flavor::field;
  return out;
}

CVector filtered_basis_vector(const HermitianOperator& h, const Box& box, const EnergyWindow& window,
                              const SiteSpin& site) {
  const auto n = h.dimension();
  if (static_cast<std::size_t>(n) != box.one_particle_dimension()) {
    throw ParameterError("operator dimension does not match the box");
  }
  const auto j = static_cast<Eigen::Index>(box.index(site.x, site.spin));
  if (window.is_full()) {
    CVector e = CVector::Zero(n);
    e[j] = 1.0;
    return e;
  }
  const auto& sp = h.spectrum();
  CVector coeffs(n);
  for (Eigen::Index m = 0; m < n; ++m) {
    coeffs[m] = window.contains(sp.eigenvalues[m]) ? std::conj(sp.eigenvectors(j, m)) : cplx{};
  }
  return sp.eigenvectors * coeffs;
}

KernelMatrix assemble_G_matrix(const HermitianOperator& h, double beta, const EnergyWindow& window,
                               const Box& box, std::span<const SiteSpin> first,
                               std::span<const SiteSpin> second, std::span<const ComplexTime> times) {
  if (first.size() != second.size() || first.empty()) {
    throw ParameterError("configurations must have equal, nonzero size");
  }
  const std::size_t n = first.size();
  if (times.size() != 2 * n) throw ParameterError("need 2N times");
  std::vector<DressedVector> rows, cols;
  for (std::size_t k = 0; k < n; ++k) {
    rows.push_back({filtered_basis_vector(h, box, window, first[k]), times[k], Flavor::creation, 0});
    cols.push_back({filtered_basis_vector(h, box, window, second[k]), times[n + k], Flavor::annihilation, 0});
  }
  return kernel_matrix(h, beta, rows, cols);
}

SkewKernelMatrix assemble_skew_matrix(const HermitianOperator& h, double beta,
                                      const EnergyWindow& window, const Box& box,
                                      std::span<const SiteSpin> sites, std::span<const int> phases,
                                      std::span<const ComplexTime> times) {
  if (sites.empty() || sites.size() % 2 != 0) throw ParameterError("need an even number of sites");
  if (phases.size() != sites.size() || times.size() != sites.size()) {
    throw ParameterError("need one phase and one time per site");
  }
  std::vector<DressedVector> vecs;
  for (std::size_t k = 0; k < sites.size(); ++k) {
    if (phases[k] != 0 && phases[k] != 1) throw ParameterError("phases must be 0 or 1");
    vecs.push_back({filtered_basis_vector(h, box, window, sites[k]), times[k], Flavor::field, phases[k]});
  }
  return skew_kernel_matrix(h, beta, vecs);
}

}  // namespace qfd
