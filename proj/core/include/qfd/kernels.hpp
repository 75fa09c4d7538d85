#pragma once

#include <span>
#include <vector>

#include "qfd/lattice.hpp"
#include "qfd/operators.hpp"

namespace qfd {

enum class Flavor { creation, annihilation, field };

/// One-particle vector attached to a complex time and an operator flavor.
/// The effective vector is i^phase * phi.
struct DressedVector {
  CVector phi;
  ComplexTime z;
  Flavor flavor = Flavor::creation;
  int phase = 0;

  CVector vector() const;
};

enum class Order { first_then_second, second_then_first };

struct TimeOrdering {
  Order order;
  int sign;
};

/// Complex-time ordering: A1 A2 when Im z1 <= Im z2, otherwise -A2 A1.
TimeOrdering time_order(const ComplexTime& z1, const ComplexTime& z2) noexcept;

/// Bogoliubov evolution of the one-particle argument: e^{izH} phi for creation,
/// e^{i conj(z) H} phi for annihilation. Field flavor is rejected since B(phi)
/// carries both.
CVector evolve(const DressedVector& v, const HermitianOperator& h);

/// A factor expressed in eigenbasis coordinates of H (U* i^p phi).
struct SpectralFactor {
  Flavor flavor;
  CVector coords;
  ComplexTime z;
};

SpectralFactor to_spectral(const HermitianOperator& h, const DressedVector& v);

/// rho(tau_{z1}(A1) tau_{z2}(A2)) for A in {a*, a, B} in the Gibbs state of H,
/// from the closed forms rho(a*(f) a(g)) = <g, (1+e^{beta H})^{-1} f> and
/// rho(a(g) a*(f)) = <g, (1+e^{-beta H})^{-1} f>. Combined symbols are
/// evaluated in one exponential, bounded whenever Im z1 <= Im z2.
cplx product_expectation(const HermitianOperator& h, double beta, const SpectralFactor& first,
                         const SpectralFactor& second);

/// rho(A1 A2) if order is first_then_second, else -rho(A2 A1).
cplx ordered_expectation(const HermitianOperator& h, double beta, const SpectralFactor& first,
                         const SpectralFactor& second, Order order);

/// G((phi1, z1), (phi2, z2)) for a creation-flavored left and annihilation-flavored right vector.
cplx two_point_G(const HermitianOperator& h, double beta, const DressedVector& left,
                 const DressedVector& right);

/// Time-ordered correlation of field operators B(phi) = a*(phi) + a(phi).
cplx two_point_field_G(const HermitianOperator& h, double beta, const DressedVector& left,
                       const DressedVector& right);

struct SiteSpin {
  Point x;
  int spin = 0;
};

/// N x N matrix of G entries with the dressed vectors that generate it.
struct KernelMatrix {
  CMatrix values;
  std::vector<DressedVector> rows;     // creation flavor, z_1..z_N
  std::vector<DressedVector> columns;  // annihilation flavor, z_{N+1}..z_{2N}

  /// ||phi_1||, ..., ||phi_2N||
  std::vector<double> vector_norms() const;
};

/// 2N x 2N skew-symmetric matrix of field correlations; diagonal is zero.
struct SkewKernelMatrix {
  CMatrix values;
  std::vector<DressedVector> vectors;  // field flavor, phases applied through DressedVector::phase

  std::vector<double> vector_norms() const;
};

KernelMatrix kernel_matrix(const HermitianOperator& h, double beta,
                           std::span<const DressedVector> rows,
                           std::span<const DressedVector> columns);

/// Upper triangle from two_point_field_G, lower triangle mirrored with a sign.
SkewKernelMatrix skew_kernel_matrix(const HermitianOperator& h, double beta,
                                    std::span<const DressedVector> vectors);

/// chi_I(H) e_{x,sigma}
CVector filtered_basis_vector(const HermitianOperator& h, const Box& box, const EnergyWindow& window,
                              const SiteSpin& site);

/// Entry (k, l) = G((chi_I e_{x_k}, z_k), (chi_I e_{x_{N+l}}, z_{N+l})).
KernelMatrix assemble_G_matrix(const HermitianOperator& h, double beta, const EnergyWindow& window,
                               const Box& box, std::span<const SiteSpin> first,
                               std::span<const SiteSpin> second, std::span<const ComplexTime> times);

/// Entry (k, l) = Gcal((i^{p_k} chi_I e_{x_k}, z_k), (i^{p_l} chi_I e_{x_l}, z_l)) for k < l.
SkewKernelMatrix assemble_skew_matrix(const HermitianOperator& h, double beta,
                                      const EnergyWindow& window, const Box& box,
                                      std::span<const SiteSpin> sites, std::span<const int> phases,
                                      std::span<const ComplexTime> times);

}  // namespace qfd
