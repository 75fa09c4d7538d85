#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <mutex>

#include <Eigen/Dense>

namespace qfd {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Point z = t - i s of the strip R - i[0, beta]; Im(z) = -s.
struct ComplexTime {
  double t = 0.0;
  double s = 0.0;

  constexpr double real() const noexcept { return t; }
  constexpr double imag() const noexcept { return -s; }
  cplx value() const noexcept { return {t, -s}; }
  static ComplexTime from_complex(cplx z) noexcept { return {z.real(), -z.imag()}; }

  friend constexpr bool operator==(const ComplexTime&, const ComplexTime&) = default;
};

/// Throws ParameterError unless 0 <= s <= beta (rounding slack 1e-12 beta).
void require_in_strip(const ComplexTime& z, double beta);
bool in_strip(const ComplexTime& z, double beta) noexcept;

/// Closed interval [a, b] of the real line, or the whole spectrum.
class EnergyWindow {
 public:
  static EnergyWindow full() noexcept { return EnergyWindow(); }
  static EnergyWindow interval(double lower, double upper);

  bool is_full() const noexcept { return full_; }
  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }
  /// Closed endpoints; eigenvalues within 1e-12 of an endpoint count as inside.
  bool contains(double lambda) const noexcept;

 private:
  EnergyWindow() = default;
  bool full_ = true;
  double lower_ = 0.0;
  double upper_ = 0.0;
};

/// Eigenvalues ascending, eigenvectors as the columns of a unitary matrix.
struct SpectralData {
  RVector eigenvalues;
  CMatrix eigenvectors;
};

/// Dense Hermitian one-particle operator. The spectral decomposition is
/// computed on first use and shared (read-only) by all copies.
class HermitianOperator {
 public:
  static constexpr double kHermiticityTolerance = 1e-10;

  explicit HermitianOperator(CMatrix h);

  Eigen::Index dimension() const noexcept { return h_.rows(); }
  const CMatrix& matrix() const noexcept { return h_; }

  const SpectralData& spectrum() const;
  const RVector& eigenvalues() const { return spectrum().eigenvalues; }
  const CMatrix& eigenvectors() const { return spectrum().eigenvectors; }
  /// max |lambda|
  double spectral_radius() const;

  /// U* phi: coordinates of phi in the eigenbasis.
  CVector to_eigenbasis(const CVector& phi) const;
  /// U c
  CVector from_eigenbasis(const CVector& coefficients) const;

 private:
  struct Cache {
    std::once_flag once;
    SpectralData data;
  };
  CMatrix h_;
  std::shared_ptr<Cache> cache_;
};

const SpectralData& eigendecompose(const HermitianOperator& h);

/// U f(Lambda) U*. Throws NumericError naming the eigenvalue where f is not finite.
CMatrix apply_function(const HermitianOperator& h, const std::function<cplx(double)>& f);

/// (1 + e^{beta lambda})^{-1} without overflow.
double fermi_factor(double beta, double lambda) noexcept;

/// ln(1 + e^x) without overflow.
double softplus(double x) noexcept;

/// e^{a lambda} (1 + e^{beta lambda})^{-1} for complex a, evaluated as a single
/// exponential so that large exponents cancel before exponentiation.
cplx exp_fermi(cplx a, double lambda, double beta) noexcept;

/// Scalar symbol e^{i z lambda} chi_I(lambda) (1 + e^{beta lambda})^{-1}.
cplx propagator_symbol(const ComplexTime& z, double beta, const EnergyWindow& window,
                       double lambda) noexcept;

/// e^{izH} chi_I(H) (1 + e^{beta H})^{-1}; operator norm at most one on the strip.
CMatrix weighted_propagator(const HermitianOperator& h, const ComplexTime& z, double beta,
                            const EnergyWindow& window);

/// chi_I(H)
CMatrix spectral_projection(const HermitianOperator& h, const EnergyWindow& window);

/// sum_m conj(a_m) g_m b_m, i.e. <psi, g(H) phi> from eigenbasis coordinates.
cplx spectral_sandwich(const CVector& psi_hat, const CVector& symbol, const CVector& phi_hat);

}  // namespace qfd
