#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qfd/kernels.hpp"
#include "qfd/operators.hpp"

namespace qfd {

/// Determinant via row-pivoted LU. Singular input gives 0; the 0x0 matrix gives 1.
cplx determinant(const CMatrix& m);

enum class PfaffianMethod { stable, combinatorial };

/// Largest dimension accepted by the combinatorial (2N)! sum.
inline constexpr Eigen::Index kMaxCombinatorialPfaffian = 10;

/// Pfaffian of an even-dimensional skew-symmetric matrix.
///
/// `stable` reduces M to skew-tridiagonal form by Gauss eliminations with
/// partial pivoting (Parlett-Reid), O(N^3). `combinatorial` evaluates
/// (1 / (2^N N!)) sum_{pi in S_2N} sgn(pi) prod_j M_{pi(2j-1), pi(2j)} term by term.
/// Input must satisfy max|M + M^T| <= 1e-10 max|M|. Pf of the empty matrix is 1.
cplx pfaffian(const CMatrix& m, PfaffianMethod method = PfaffianMethod::stable);

/// Parity of a permutation given as images of 0..n-1: +1 or -1.
int permutation_sign(std::span<const std::size_t> perm);

enum class Axis { row, column };

struct ExpansionTerm {
  std::size_t index;  // 1-based
  Axis axis;
  cplx value;
};

struct ExpansionReport {
  cplx direct;
  std::vector<ExpansionTerm> expansions;
  double max_discrepancy = 0.0;
};

/// Row and column cofactor expansions of det(M) along index m (1-based).
ExpansionReport laplace_expand_determinant(const CMatrix& m, std::size_t index);
/// Expansions along every row and every column.
ExpansionReport determinant_expansions(const CMatrix& m);

/// sum_{n != m} (-1)^{m+n+1+theta(m-n)} M_{m,n} Pf(M without rows/cols m, n).
ExpansionReport laplace_expand_pfaffian(const CMatrix& m, std::size_t index);
ExpansionReport pfaffian_expansions(const CMatrix& m);

/// Additive slack for bound checks: 1e-12 max(1, bound).
double bound_tolerance(double bound) noexcept;

struct RowColumnBound {
  double bound;   // min over rows and columns of the sum of |entries|
  double value;   // |det|
  double margin;  // bound - value
  bool satisfied;
};

/// |det M| <= min(min_k sum_l |M_kl|, min_l sum_k |M_kl|).
RowColumnBound det_row_column_bound(const CMatrix& m);
inline RowColumnBound det_row_column_bound(const KernelMatrix& m) { return det_row_column_bound(m.values); }

struct RowSumBound {
  double bound;  // sum_{n != m} |M_mn|
  double value;  // |Pf|
  bool satisfied;
};

/// |Pf M| <= sum_{n != m} |M_mn| for the row m (1-based).
RowSumBound pf_row_sum_bound(const CMatrix& m, std::size_t row);
inline RowSumBound pf_row_sum_bound(const SkewKernelMatrix& m, std::size_t row) {
  return pf_row_sum_bound(m.values, row);
}

struct UniversalBound {
  double value;         // |det| or |Pf|
  double norm_product;  // prod_k ||phi_k||
  double ratio;
  bool satisfied;       // ratio <= 1 + 1e-10
};

UniversalBound universal_bound_check(cplx value, std::span<const double> norms);
UniversalBound universal_bound_check(const KernelMatrix& m);
UniversalBound universal_bound_check(const SkewKernelMatrix& m);

}  // namespace qfd
