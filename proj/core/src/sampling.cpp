#include "qfd/sampling.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/QR>

namespace qfd {

double Sampler::uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

double Sampler::uniform(double a, double b) { return a + (b - a) * uniform(); }

int Sampler::integer(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(rng_() % span);
}

bool Sampler::coin() { return (rng_() >> 63) != 0; }

double Sampler::normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

cplx Sampler::complex_normal() { return {normal() / std::numbers::sqrt2, normal() / std::numbers::sqrt2}; }

CMatrix Sampler::hermitian(std::size_t n, double scale) {
  const auto d = static_cast<Eigen::Index>(n);
  CMatrix a(d, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i) a(i, j) = complex_normal();
  CMatrix h = (a + a.adjoint()) * (0.5 * scale / std::sqrt(static_cast<double>(n)));
  return h;
}

CMatrix Sampler::integer_spectrum_hermitian(std::size_t n, int max_level) {
  const auto d = static_cast<Eigen::Index>(n);
  CMatrix a(d, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i) a(i, j) = complex_normal();
  const CMatrix q = Eigen::HouseholderQR<CMatrix>(a).householderQ();
  RVector levels(d);
  for (Eigen::Index k = 0; k < d; ++k) levels[k] = integer(-max_level, max_level);
  CMatrix h = q * levels.cast<cplx>().asDiagonal() * q.adjoint();
  return (h + h.adjoint()) * 0.5;
}

CVector Sampler::unit_vector(std::size_t n) {
  CVector v(static_cast<Eigen::Index>(n));
  for (auto& x : v) x = complex_normal();
  return v / v.norm();
}

CMatrix Sampler::skew(std::size_t n) {
  const auto d = static_cast<Eigen::Index>(n);
  CMatrix m = CMatrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = i + 1; j < d; ++j) {
      m(i, j) = complex_normal();
      m(j, i) = -m(i, j);
    }
  return m;
}

ComplexTime Sampler::strip_time(double beta, double t_range, double boundary) {
  ComplexTime z;
  z.t = uniform(-t_range, t_range);
  if (boundary > 0.0 && uniform() < boundary) {
    z.s = coin() ? beta : 0.0;
  } else {
    z.s = uniform(0.0, beta);
  }
  return z;
}

}  // namespace qfd
