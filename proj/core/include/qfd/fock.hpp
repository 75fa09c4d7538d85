#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/SparseCore>

#include "qfd/kernels.hpp"
#include "qfd/operators.hpp"

namespace qfd {

using SparseCMatrix = Eigen::SparseMatrix<cplx>;

/// Largest mode count of the brute-force Fock space (dimension 2^10).
inline constexpr std::size_t kMaxFockModes = 10;

/// CAR operators on the 2^n-dimensional Fock space over the one-particle
/// space of H, built with Jordan-Wigner sign strings in the site basis.
class FockRep {
 public:
  explicit FockRep(HermitianOperator h);

  std::size_t modes() const noexcept { return modes_; }
  std::size_t dimension() const noexcept { return std::size_t{1} << modes_; }
  const HermitianOperator& hamiltonian() const noexcept { return h_; }

  /// a_k in the occupation basis of the site modes.
  const SparseCMatrix& annihilator(std::size_t k) const { return annihilators_.at(k); }
  SparseCMatrix creator(std::size_t k) const { return annihilators_.at(k).adjoint(); }
  /// a(phi) = sum_k conj(phi_k) a_k (antilinear in phi)
  SparseCMatrix annihilation(const CVector& phi) const;
  /// a*(phi) = sum_k phi_k a_k^*
  SparseCMatrix creation(const CVector& phi) const;
  /// dGamma(A) = sum_{jk} A_jk a_j^* a_k
  SparseCMatrix second_quantize(const CMatrix& a) const;

 private:
  HermitianOperator h_;
  std::size_t modes_;
  std::vector<SparseCMatrix> annihilators_;
};

FockRep build_fock(const HermitianOperator& h);

/// max over j, k of |{a_j, a_k^*} - delta_jk| and |{a_j, a_k}| (entrywise).
double car_residual(const FockRep& rep);

struct MonomialFactor {
  Flavor flavor;
  CVector phi;
  ComplexTime z;
};

/// The monomial sgn(pi) A_{pi^-1(1)} ... A_{pi^-1(n)}: factor k sits at
/// position positions[k] (0-based).
struct OrderedMonomial {
  std::vector<MonomialFactor> factors;
  std::vector<std::size_t> positions;

  static OrderedMonomial in_order(std::vector<MonomialFactor> factors);
  int sign() const;
  void validate() const;
};

/// Tr(e^{-beta dGamma(H)} X) / Tr(e^{-beta dGamma(H)}) for the ordered
/// monomial, each factor built from its one-particle vector evolved to its
/// complex time. Times must lie in the strip.
cplx gibbs_expectation(const FockRep& rep, double beta, const OrderedMonomial& monomial);

/// Expectation of the plain product factors[0] factors[1] ... (no sign, no strip check).
cplx product_expectation(const FockRep& rep, double beta, std::span<const MonomialFactor> factors);

/// Expectation of the product in position order where the factor at
/// position p (1-based, m factors) carries time xi_1 + ... + xi_{m-p+1}.
/// `factors[k]` carries no time of its own here; `positions` places it.
cplx chained_expectation(const FockRep& rep, double beta, std::span<const MonomialFactor> factors,
                         std::span<const std::size_t> positions, std::span<const cplx> xi);

struct WickCheck {
  cplx lhs;
  cplx rhs;
  double discrepancy;
};

/// Determinant identity for pi given on vector labels 1..2N (0-based
/// positions). lhs: det of the pair expectations ordered as pi orders each
/// pair; rhs: ordered expectation of a*(phi_1)..a*(phi_N) a(phi_2N)..a(phi_N+1)
/// with the same placement and the sign of the induced argument permutation.
WickCheck wick_determinant_check(const FockRep& rep, double beta, std::span<const CVector> phis,
                                 std::span<const ComplexTime> times,
                                 std::span<const std::size_t> label_positions);

/// Pfaffian identity for field operators B(phi_1)..B(phi_2N) placed by pi.
WickCheck wick_pfaffian_check(const FockRep& rep, double beta, std::span<const CVector> phis,
                              std::span<const ComplexTime> times, std::span<const std::size_t> positions);

/// KMS cyclic exchange on the chained structure: shifting the variable xi_k
/// (1-based) by -i beta moves the first m-k+1 positions to the end of the
/// product at real times. Returns |lhs - rhs|.
double kms_exchange_check(const FockRep& rep, double beta, std::span<const MonomialFactor> factors,
                          std::span<const std::size_t> positions, std::span<const double> t,
                          std::size_t k);

}  // namespace qfd
