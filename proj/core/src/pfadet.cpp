#include "qfd/pfadet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "qfd/errors.hpp"

namespace qfd {

cplx determinant(const CMatrix& m) {
  if (m.rows() != m.cols()) throw ParameterError("determinant of a non-square matrix");
  if (m.rows() == 0) return {1.0, 0.0};
  if (m.rows() == 1) return m(0, 0);
  if (m.rows() == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  return Eigen::PartialPivLU<CMatrix>(m).determinant();
}

int permutation_sign(std::span<const std::size_t> perm) {
  std::vector<bool> seen(perm.size(), false);
  std::size_t transpositions = 0;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = perm[j]) {
      if (perm[j] >= perm.size()) throw ParameterError("not a permutation");
      seen[j] = true;
      ++len;
    }
    transpositions += len - 1;
  }
  return transpositions % 2 == 0 ? 1 : -1;
}

namespace {

void require_skew(const CMatrix& m) {
  if (m.rows() != m.cols()) throw ValidationError("Pfaffian of a non-square matrix");
  if (m.rows() % 2 != 0) throw ValidationError("Pfaffian needs an even dimension");
  if (m.rows() == 0) return;
  const double scale = m.cwiseAbs().maxCoeff();
  const double asym = (m + m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * scale) {
    std::ostringstream msg;
    msg << "matrix is not skew-symmetric: max |M + M^T| = " << asym;
    throw ValidationError(msg.str());
  }
}

cplx pfaffian_parlett_reid(CMatrix a) {
  const Eigen::Index n = a.rows();
  cplx pf{1.0, 0.0};
  for (Eigen::Index k = 0; k + 1 < n; k += 2) {
    Eigen::Index pivot = 0;
    a.col(k).tail(n - k - 1).cwiseAbs().maxCoeff(&pivot);
    pivot += k + 1;
    if (pivot != k + 1) {
      a.row(k + 1).swap(a.row(pivot));
      a.col(k + 1).swap(a.col(pivot));
      pf = -pf;
    }
    if (a(k + 1, k) == cplx{}) return {0.0, 0.0};
    pf *= a(k, k + 1);
    const Eigen::Index rest = n - k - 2;
    if (rest > 0) {
      const CVector tau = a.row(k).tail(rest).transpose() / a(k, k + 1);
      const CVector col = a.col(k + 1).tail(rest);
      a.bottomRightCorner(rest, rest) += tau * col.transpose() - col * tau.transpose();
    }
  }
  return pf;
}

cplx pfaffian_combinatorial(const CMatrix& a) {
  const Eigen::Index n = a.rows();
  if (n > kMaxCombinatorialPfaffian) {
    throw ResourceError("combinatorial Pfaffian limited to dimension <= 10");
  }
  std::vector<std::size_t> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  cplx sum{0.0, 0.0};
  do {
    cplx term{1.0, 0.0};
    for (Eigen::Index j = 0; j < n; j += 2) {
      term *= a(static_cast<Eigen::Index>(perm[j]), static_cast<Eigen::Index>(perm[j + 1]));
    }
    sum += static_cast<double>(permutation_sign(perm)) * term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  double norm = 1.0;
  for (Eigen::Index j = 1; j <= n / 2; ++j) norm *= 2.0 * static_cast<double>(j);
  return sum / norm;
}

CMatrix remove(const CMatrix& m, std::vector<Eigen::Index> drop_rows, std::vector<Eigen::Index> drop_cols) {
  std::vector<Eigen::Index> keep_r, keep_c;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    if (std::find(drop_rows.begin(), drop_rows.end(), i) == drop_rows.end()) keep_r.push_back(i);
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    if (std::find(drop_cols.begin(), drop_cols.end(), j) == drop_cols.end()) keep_c.push_back(j);
  return m(keep_r, keep_c);
}

double sign_power(std::size_t exponent) { return exponent % 2 == 0 ? 1.0 : -1.0; }

void finish(ExpansionReport& r) {
  r.max_discrepancy = 0.0;
  for (const auto& e : r.expansions) r.max_discrepancy = std::max(r.max_discrepancy, std::abs(e.value - r.direct));
}

cplx det_row_expansion(const CMatrix& m, std::size_t row) {
  const auto n = static_cast<std::size_t>(m.rows());
  cplx acc{};
  for (std::size_t col = 1; col <= n; ++col) {
    const auto r = static_cast<Eigen::Index>(row - 1), c = static_cast<Eigen::Index>(col - 1);
    acc += sign_power(row + col) * m(r, c) * determinant(remove(m, {r}, {c}));
  }
  return acc;
}

cplx pf_row_expansion(const CMatrix& m, std::size_t row) {
  const auto n = static_cast<std::size_t>(m.rows());
  cplx acc{};
  for (std::size_t col = 1; col <= n; ++col) {
    if (col == row) continue;
    const std::size_t theta = row > col ? 1 : 0;
    const auto r = static_cast<Eigen::Index>(row - 1), c = static_cast<Eigen::Index>(col - 1);
    acc += sign_power(row + col + 1 + theta) * m(r, c) *
           pfaffian_parlett_reid(remove(m, {r, c}, {r, c}));
  }
  return acc;
}

void require_index(const CMatrix& m, std::size_t index) {
  if (m.rows() != m.cols()) throw ParameterError("expansion of a non-square matrix");
  if (index < 1 || index > static_cast<std::size_t>(m.rows())) {
    throw ParameterError("expansion index out of range");
  }
}

}  // namespace

cplx pfaffian(const CMatrix& m, PfaffianMethod method) {
  require_skew(m);
  if (m.rows() == 0) return {1.0, 0.0};
  return method == PfaffianMethod::stable ? pfaffian_parlett_reid(m) : pfaffian_combinatorial(m);
}

ExpansionReport laplace_expand_determinant(const CMatrix& m, std::size_t index) {
  require_index(m, index);
  ExpansionReport r{determinant(m), {}, 0.0};
  r.expansions.push_back({index, Axis::row, det_row_expansion(m, index)});
  r.expansions.push_back({index, Axis::column, det_row_expansion(m.transpose(), index)});
  finish(r);
  return r;
}

ExpansionReport determinant_expansions(const CMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) throw ParameterError("expansion needs a nonempty square matrix");
  ExpansionReport r{determinant(m), {}, 0.0};
  const CMatrix mt = m.transpose();
  for (std::size_t i = 1; i <= static_cast<std::size_t>(m.rows()); ++i) {
    r.expansions.push_back({i, Axis::row, det_row_expansion(m, i)});
    r.expansions.push_back({i, Axis::column, det_row_expansion(mt, i)});
  }
  finish(r);
  return r;
}

ExpansionReport laplace_expand_pfaffian(const CMatrix& m, std::size_t index) {
  require_skew(m);
  require_index(m, index);
  ExpansionReport r{pfaffian(m), {}, 0.0};
  r.expansions.push_back({index, Axis::row, pf_row_expansion(m, index)});
  finish(r);
  return r;
}

ExpansionReport pfaffian_expansions(const CMatrix& m) {
  require_skew(m);
  if (m.rows() == 0) throw ParameterError("expansion needs a nonempty matrix");
  ExpansionReport r{pfaffian(m), {}, 0.0};
  for (std::size_t i = 1; i <= static_cast<std::size_t>(m.rows()); ++i) {
    r.expansions.push_back({i, Axis::row, pf_row_expansion(m, i)});
  }
  finish(r);
  return r;
}

double bound_tolerance(double bound) noexcept { return 1e-12 * std::max(1.0, bound); }

RowColumnBound det_row_column_bound(const CMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) throw ParameterError("bound needs a nonempty square matrix");
  const Eigen::MatrixXd mag = m.cwiseAbs();
  const double bound = std::min(mag.rowwise().sum().minCoeff(), mag.colwise().sum().minCoeff());
  const double value = std::abs(determinant(m));
  return {bound, value, bound - value, value <= bound + bound_tolerance(bound)};
}

RowSumBound pf_row_sum_bound(const CMatrix& m, std::size_t row) {
  require_skew(m);
  require_index(m, row);
  const auto r = static_cast<Eigen::Index>(row - 1);
  double bound = 0.0;
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    if (c != r) bound += std::abs(m(r, c));
  const double value = std::abs(pfaffian(m));
  return {bound, value, value <= bound + bound_tolerance(bound)};
}

UniversalBound universal_bound_check(cplx value, std::span<const double> norms) {
  double prod = 1.0;
  for (double n : norms) prod *= n;
  const double v = std::abs(value);
  double ratio;
  if (prod > 0.0) {
    ratio = v / prod;
  } else {
    ratio = v == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return {v, prod, ratio, ratio <= 1.0 + 1e-10};
}

UniversalBound universal_bound_check(const KernelMatrix& m) {
  const auto norms = m.vector_norms();
  return universal_bound_check(determinant(m.values), norms);
}

UniversalBound universal_bound_check(const SkewKernelMatrix& m) {
  const auto norms = m.vector_norms();
  return universal_bound_check(pfaffian(m.values), norms);
}

}  // namespace qfd
