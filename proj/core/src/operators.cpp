#include "qfd/operators.hpp"

#include <cmath>
#include <sstream>

#include "qfd/errors.hpp"

namespace qfd {

namespace {
constexpr double kStripSlack = 1e-12;
constexpr double kWindowSlack = 1e-12;
}  // namespace

bool in_strip(const ComplexTime& z, double beta) noexcept {
  const double slack = kStripSlack * std::max(1.0, beta);
  return std::isfinite(z.t) && z.s >= -slack && z.s <= beta + slack;
}

void require_in_strip(const ComplexTime& z, double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ParameterError("beta must be positive");
  if (!in_strip(z, beta)) {
    std::ostringstream msg;
    msg << "time " << z.t << " - i" << z.s << " lies outside the strip R - i[0, " << beta << "]";
    throw ParameterError(msg.str());
  }
}

EnergyWindow EnergyWindow::interval(double lower, double upper) {
  if (!(lower <= upper)) throw ParameterError("energy window needs lower <= upper");
  EnergyWindow w;
  w.full_ = false;
  w.lower_ = lower;
  w.upper_ = upper;
  return w;
}

bool EnergyWindow::contains(double lambda) const noexcept {
  if (full_) return true;
  return lambda >= lower_ - kWindowSlack && lambda <= upper_ + kWindowSlack;
}

HermitianOperator::HermitianOperator(CMatrix h) : h_(std::move(h)), cache_(std::make_shared<Cache>()) {
  if (h_.rows() != h_.cols() || h_.rows() == 0) {
    throw ValidationError("Hermitian operator must be a nonempty square matrix");
  }
  if (!h_.allFinite()) throw ValidationError("Hamiltonian has non-finite entries");
  const double scale = std::max(1.0, h_.cwiseAbs().maxCoeff());
  const double asym = (h_ - h_.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kHermiticityTolerance * scale) {
    std::ostringstream msg;
    msg << "matrix is not Hermitian: max |H - H*| = " << asym;
    throw ValidationError(msg.str());
  }
  h_ = (0.5 * (h_ + h_.adjoint())).eval();
}

const SpectralData& HermitianOperator::spectrum() const {
  std::call_once(cache_->once, [this] {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h_);
    if (solver.info() != Eigen::Success) throw NumericError("eigendecomposition did not converge");
    cache_->data.eigenvalues = solver.eigenvalues();
    cache_->data.eigenvectors = solver.eigenvectors();
  });
  return cache_->data;
}

double HermitianOperator::spectral_radius() const { return eigenvalues().cwiseAbs().maxCoeff(); }

CVector HermitianOperator::to_eigenbasis(const CVector& phi) const {
  if (phi.size() != dimension()) throw ParameterError("vector dimension mismatch");
  return eigenvectors().adjoint() * phi;
}

CVector HermitianOperator::from_eigenbasis(const CVector& coefficients) const {
  if (coefficients.size() != dimension()) throw ParameterError("vector dimension mismatch");
  return eigenvectors() * coefficients;
}

const SpectralData& eigendecompose(const HermitianOperator& h) { return h.spectrum(); }

CMatrix apply_function(const HermitianOperator& h, const std::function<cplx(double)>& f) {
  const auto& sp = h.spectrum();
  CVector values(sp.eigenvalues.size());
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    const double lambda = sp.eigenvalues[k];
    values[k] = f(lambda);
    if (!std::isfinite(values[k].real()) || !std::isfinite(values[k].imag())) {
      std::ostringstream msg;
      msg << "function is not finite at eigenvalue " << lambda;
      throw NumericError(msg.str());
    }
  }
  return sp.eigenvectors * values.asDiagonal() * sp.eigenvectors.adjoint();
}

double fermi_factor(double beta, double lambda) noexcept {
  const double x = beta * lambda;
  if (x <= 0.0) return 1.0 / (1.0 + std::exp(x));
  const double e = std::exp(-x);
  return e / (1.0 + e);
}

double softplus(double x) noexcept {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

cplx exp_fermi(cplx a, double lambda, double beta) noexcept {
  const double re = a.real() * lambda - softplus(beta * lambda);
  const double im = a.imag() * lambda;
  return std::polar(std::exp(re), im);
}

cplx propagator_symbol(const ComplexTime& z, double beta, const EnergyWindow& window,
                       double lambda) noexcept {
  if (!window.contains(lambda)) return {0.0, 0.0};
  // i z = s + i t
  return exp_fermi(cplx(z.s, z.t), lambda, beta);
}

CMatrix weighted_propagator(const HermitianOperator& h, const ComplexTime& z, double beta,
                            const EnergyWindow& window) {
  require_in_strip(z, beta);
  return apply_function(h, [&](double lambda) { return propagator_symbol(z, beta, window, lambda); });
}

CMatrix spectral_projection(const HermitianOperator& h, const EnergyWindow& window) {
  return apply_function(h, [&](double lambda) { return cplx(window.contains(lambda) ? 1.0 : 0.0); });
}

cplx spectral_sandwich(const CVector& psi_hat, const CVector& symbol, const CVector& phi_hat) {
  cplx acc{0.0, 0.0};
  for (Eigen::Index m = 0; m < symbol.size(); ++m) acc += std::conj(psi_hat[m]) * symbol[m] * phi_hat[m];
  return acc;
}

}  // namespace qfd
