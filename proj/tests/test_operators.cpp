#include <cmath>
#include <complex>

#include <gtest/gtest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "qfd/errors.hpp"
#include "qfd/operators.hpp"
#include "qfd/sampling.hpp"

namespace {

using qfd::CMatrix;
using qfd::ComplexTime;
using qfd::cplx;
using qfd::EnergyWindow;
using qfd::HermitianOperator;

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

TEST(Eigendecompose, ZeroMatrixGivesZeroSpectrumAndIdentity) {
  HermitianOperator h(CMatrix::Zero(4, 4));
  EXPECT_EQ(h.eigenvalues().cwiseAbs().maxCoeff(), 0.0);
  EXPECT_LT(max_abs(h.eigenvectors() - CMatrix::Identity(4, 4)), 1e-15);
}

TEST(Eigendecompose, DiagonalGivesSortedDiagonal) {
  CMatrix d = CMatrix::Zero(3, 3);
  d.diagonal() << 2.0, -1.0, 0.5;
  HermitianOperator h(d);
  EXPECT_DOUBLE_EQ(h.eigenvalues()[0], -1.0);
  EXPECT_DOUBLE_EQ(h.eigenvalues()[1], 0.5);
  EXPECT_DOUBLE_EQ(h.eigenvalues()[2], 2.0);
}

TEST(Eigendecompose, ReconstructsRandomHermitian) {
  qfd::Sampler rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    HermitianOperator h(rng.hermitian(16, 2.0));
    const auto& sp = h.spectrum();
    CMatrix back = sp.eigenvectors * sp.eigenvalues.cast<cplx>().asDiagonal() * sp.eigenvectors.adjoint();
    EXPECT_LT(max_abs(back - h.matrix()), 1e-10);
    EXPECT_LT(max_abs(sp.eigenvectors.adjoint() * sp.eigenvectors - CMatrix::Identity(16, 16)), 1e-12);
  }
}

TEST(Eigendecompose, RejectsNonHermitianInput) {
  CMatrix m(2, 2);
  m << 0, 1, 0, 0;
  EXPECT_THROW(HermitianOperator{m}, qfd::ValidationError);
  CMatrix nan = CMatrix::Zero(2, 2);
  nan(0, 0) = std::nan("");
  EXPECT_THROW(HermitianOperator{nan}, qfd::ValidationError);
}

TEST(ApplyFunction, IdentityAndConstant) {
  qfd::Sampler rng(4);
  HermitianOperator h(rng.hermitian(8));
  EXPECT_LT(max_abs(qfd::apply_function(h, [](double x) { return cplx(x); }) - h.matrix()), 1e-10);
  EXPECT_LT(max_abs(qfd::apply_function(h, [](double) { return cplx(1.0); }) - CMatrix::Identity(8, 8)),
            1e-12);
}

TEST(ApplyFunction, ExpOnDiagonal) {
  CMatrix d = CMatrix::Zero(2, 2);
  d(1, 1) = std::log(2.0);
  CMatrix e = qfd::apply_function(HermitianOperator(d), [](double x) { return cplx(std::exp(x)); });
  EXPECT_NEAR(std::abs(e(0, 0) - 1.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(e(1, 1) - 2.0), 0.0, 1e-14);
  EXPECT_EQ(std::abs(e(0, 1)), 0.0);
}

TEST(ApplyFunction, NonFiniteValueNamesEigenvalue) {
  CMatrix d = CMatrix::Zero(1, 1);
  try {
    qfd::apply_function(HermitianOperator(d), [](double x) { return cplx(1.0 / x); });
    FAIL() << "expected NumericError";
  } catch (const qfd::NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("eigenvalue 0"), std::string::npos);
  }
}

TEST(FermiFactor, MatchesLongDoubleReference) {
  for (double beta : {0.1, 1.0, 7.0}) {
    for (double lambda = -200.0; lambda <= 200.0; lambda += 0.37) {
      // same rounded argument, so only the evaluation is compared
      const double x = beta * lambda;
      long double ref = 1.0L / (1.0L + std::exp(static_cast<long double>(x)));
      double got = qfd::fermi_factor(beta, lambda);
      ASSERT_TRUE(std::isfinite(got));
      EXPECT_NEAR(got, static_cast<double>(ref), 1e-15 * static_cast<double>(ref) + 1e-300);
    }
  }
  EXPECT_EQ(qfd::fermi_factor(1.0, 0.0), 0.5);
  EXPECT_EQ(qfd::fermi_factor(1.0, 1e6), 0.0);
  EXPECT_EQ(qfd::fermi_factor(1.0, -1e6), 1.0);
}

TEST(ExpFermi, StaysFiniteWhenFactorsOverflowSeparately) {
  // e^{800} / (1 + e^{800}) overflows term by term but equals 1.
  EXPECT_NEAR(std::abs(qfd::exp_fermi(cplx(1.0, 0.0), 800.0, 1.0) - 1.0), 0.0, 1e-12);
  long double ref = std::exp(0.5L * 3) / (1.0L + std::exp(2.0L * 3));
  EXPECT_NEAR(qfd::exp_fermi(cplx(0.5, 0.0), 3.0, 2.0).real(), static_cast<double>(ref), 1e-16);
}

TEST(PropagatorSymbol, BoundedByOneOnTheStrip) {
  qfd::Sampler rng(5);
  for (int i = 0; i < 2000; ++i) {
    double beta = rng.uniform(0.1, 5.0);
    ComplexTime z = rng.strip_time(beta, 50.0, 0.2);
    double lambda = rng.uniform(-30.0, 30.0);
    EXPECT_LE(std::abs(qfd::propagator_symbol(z, beta, EnergyWindow::full(), lambda)), 1.0 + 1e-15);
  }
}

TEST(WeightedPropagator, ZeroHamiltonianGivesHalfIdentity) {
  HermitianOperator h(CMatrix::Zero(3, 3));
  for (ComplexTime z : {ComplexTime{0, 0}, ComplexTime{2.5, 0.3}, ComplexTime{-1, 1}}) {
    CMatrix p = qfd::weighted_propagator(h, z, 1.0, EnergyWindow::interval(-1, 1));
    EXPECT_LT(max_abs(p - 0.5 * CMatrix::Identity(3, 3)), 1e-15);
  }
}

TEST(WeightedPropagator, DiagonalEntriesFollowScalarFormula) {
  CMatrix d = CMatrix::Zero(3, 3);
  d.diagonal() << -1.0, 0.25, 2.0;
  HermitianOperator h(d);
  ComplexTime z{0.7, 0.4};
  double beta = 1.5;
  auto window = EnergyWindow::interval(-2.0, 1.0);
  CMatrix p = qfd::weighted_propagator(h, z, beta, window);
  const cplx iz = cplx(0, 1) * z.value();
  for (int k = 0; k < 3; ++k) {
    double lam = d(k, k).real();
    cplx expect = window.contains(lam) ? std::exp(iz * lam) / (1.0 + std::exp(beta * lam)) : cplx(0.0);
    EXPECT_LT(std::abs(p(k, k) - expect), 1e-14);
  }
}

TEST(WeightedPropagator, MatchesMatrixExponentialOracle) {
  qfd::Sampler rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    double beta = rng.uniform(0.2, 2.0);
    HermitianOperator h(rng.hermitian(6, 1.5));
    ComplexTime z = rng.strip_time(beta, 3.0);
    CMatrix iz_h = cplx(0, 1) * z.value() * h.matrix();
    CMatrix bh = beta * h.matrix();
    CMatrix oracle = iz_h.exp() * (CMatrix::Identity(6, 6) + bh.exp()).inverse();
    EXPECT_LT(max_abs(qfd::weighted_propagator(h, z, beta, EnergyWindow::full()) - oracle), 1e-10);
  }
}

// At real z = t' - s the symbol reduces to e^{i(t'-s)H}(1 + e^{beta H})^{-1}.
TEST(WeightedPropagator, RealTimesGiveRhoOfTheDefiningFamily) {
  qfd::Sampler rng(7);
  HermitianOperator h(rng.hermitian(5));
  double s = 0.3, tp = 1.9, beta = 1.0;
  CMatrix ith = cplx(0, tp - s) * h.matrix();
  CMatrix bh = beta * h.matrix();
  CMatrix rho = ith.exp() * (CMatrix::Identity(5, 5) + bh.exp()).inverse();
  EXPECT_LT(max_abs(qfd::weighted_propagator(h, ComplexTime{tp - s, 0.0}, beta, EnergyWindow::full()) - rho),
            1e-12);
}

TEST(WeightedPropagator, RejectsTimesOutsideStrip) {
  HermitianOperator h(CMatrix::Zero(2, 2));
  EXPECT_THROW(qfd::weighted_propagator(h, ComplexTime{0, 1.5}, 1.0, EnergyWindow::full()),
               qfd::ParameterError);
  EXPECT_THROW(qfd::weighted_propagator(h, ComplexTime{0, -0.1}, 1.0, EnergyWindow::full()),
               qfd::ParameterError);
}

TEST(SpectralProjection, FullDisjointAndIdempotent) {
  qfd::Sampler rng(8);
  HermitianOperator h(rng.hermitian(10));
  EXPECT_LT(max_abs(qfd::spectral_projection(h, EnergyWindow::full()) - CMatrix::Identity(10, 10)), 1e-12);
  double top = h.eigenvalues().maxCoeff();
  EXPECT_LT(max_abs(qfd::spectral_projection(h, EnergyWindow::interval(top + 1, top + 2))), 1e-15);
  double median = h.eigenvalues()[5];
  CMatrix p = qfd::spectral_projection(h, EnergyWindow::interval(median, top));
  EXPECT_LT(max_abs(p * p - p), 1e-10);
  EXPECT_LT(max_abs(p * h.matrix() - h.matrix() * p), 1e-10);
}

TEST(EnergyWindow, RejectsInvertedInterval) {
  EXPECT_THROW(EnergyWindow::interval(1.0, 0.0), qfd::ParameterError);
}

}  // namespace
