#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "qfd/operators.hpp"

namespace qfd {

/// Random draws built on the raw 64-bit engine output only, so streams are
/// identical across standard library implementations.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  /// [0, 1)
  double uniform();
  double uniform(double a, double b);
  /// integer in [lo, hi]
  int integer(int lo, int hi);
  bool coin();
  double normal();
  cplx complex_normal();

  /// Hermitian with complex Gaussian entries of variance scale^2 / n.
  CMatrix hermitian(std::size_t n, double scale = 1.0);
  /// U diag(levels) U* with Haar-like U and integer levels in [-max_level, max_level].
  CMatrix integer_spectrum_hermitian(std::size_t n, int max_level);
  CVector unit_vector(std::size_t n);
  /// Complex Gaussian skew-symmetric matrix.
  CMatrix skew(std::size_t n);
  /// t uniform in [-t_range, t_range]; s uniform in [0, beta], or drawn from
  /// {0, beta} with probability `boundary`.
  ComplexTime strip_time(double beta, double t_range, double boundary = 0.0);

  std::mt19937_64& engine() noexcept { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace qfd
