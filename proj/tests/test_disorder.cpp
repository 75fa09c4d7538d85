#include <cmath>
#include <stdexcept>

#include <gtest/gtest.h>

#include "qfd/disorder.hpp"
#include "qfd/errors.hpp"

namespace {

using qfd::DisorderModel;
using qfd::DisorderSample;

DisorderModel chain(int side, double strength, std::uint64_t seed = 0) {
  DisorderModel m;
  m.box = qfd::Box(1, side, 1);
  m.strength = strength;
  m.seed = seed;
  return m;
}

TEST(SampleHamiltonian, CleanChainIsTridiagonal) {
  auto h = qfd::sample_hamiltonian(chain(3, 0.0), 0).matrix();
  qfd::CMatrix expect(3, 3);
  expect << 0, -1, 0, -1, 0, -1, 0, -1, 0;
  EXPECT_EQ((h - expect).cwiseAbs().maxCoeff(), 0.0);
}

TEST(SampleHamiltonian, SameSeedAndIndexAreBitIdentical) {
  auto m = chain(16, 3.0, 42);
  auto a = qfd::sample_hamiltonian(m, 7).matrix();
  auto b = qfd::sample_hamiltonian(m, 7).matrix();
  EXPECT_TRUE(a == b);
  EXPECT_FALSE(a == qfd::sample_hamiltonian(m, 8).matrix());
}

TEST(SampleHamiltonian, SpectrumInsideGershgorinInterval) {
  auto m = chain(64, 4.0, 1);
  for (std::size_t i = 0; i < 20; ++i) {
    auto h = qfd::sample_hamiltonian(m, i);
    EXPECT_GE(h.eigenvalues().minCoeff(), -2.0 - 4.0 - 1e-12);
    EXPECT_LE(h.eigenvalues().maxCoeff(), 2.0 + 4.0 + 1e-12);
  }
}

TEST(SampleHamiltonian, PotentialSharedAcrossSpins) {
  DisorderModel m;
  m.box = qfd::Box(2, 3, 2);
  m.strength = 2.0;
  auto h = qfd::sample_hamiltonian(m, 3).matrix();
  auto v = qfd::onsite_potential(m, 3);
  ASSERT_EQ(v.size(), 9u);
  for (std::size_t x = 0; x < 9; ++x) {
    EXPECT_DOUBLE_EQ(h(2 * x, 2 * x).real(), 2.0 * v[x]);
    EXPECT_DOUBLE_EQ(h(2 * x + 1, 2 * x + 1).real(), 2.0 * v[x]);
    EXPECT_EQ(h(2 * x, 2 * x + 1), qfd::cplx(0.0));
  }
  // (0,0) and (1,0) are neighbours, (0,0) and (1,1) are not.
  EXPECT_EQ(h(0, 2), qfd::cplx(-1.0));
  EXPECT_EQ(h(0, 8), qfd::cplx(0.0));
}

TEST(SampleHamiltonian, RejectsNegativeStrength) {
  EXPECT_THROW(qfd::sample_hamiltonian(chain(4, -1.0), 0), qfd::ParameterError);
}

TEST(Expectation, ConstantEstimatorHasZeroError) {
  auto est = qfd::expectation(chain(4, 1.0), [](const DisorderSample&) { return 2.5; }, 10);
  EXPECT_EQ(est.mean, 2.5);
  EXPECT_EQ(est.std_error, 0.0);
  EXPECT_EQ(est.count, 10u);
}

TEST(Expectation, FirstSitePotentialHasMeanZero) {
  auto est = qfd::expectation(chain(4, 1.0, 9), [](const DisorderSample& s) { return s.potential()[0]; },
                              20000, 2);
  EXPECT_LT(std::abs(est.mean), 3.0 * est.std_error);
}

TEST(Expectation, SecondMomentIsOneThird) {
  auto est = qfd::expectation(chain(4, 1.0, 10),
                              [](const DisorderSample& s) { return s.potential()[0] * s.potential()[0]; },
                              20000, 2);
  EXPECT_LT(std::abs(est.mean - 1.0 / 3.0), 3.0 * est.std_error);
}

TEST(Expectation, IndependentOfThreadCount) {
  auto m = chain(12, 4.0, 5);
  auto estimator = [](const DisorderSample& s) { return s.hamiltonian().eigenvalues()[0]; };
  auto one = qfd::expectation(m, estimator, 64, 1);
  auto four = qfd::expectation(m, estimator, 64, 4);
  EXPECT_EQ(one.mean, four.mean);
  EXPECT_EQ(one.std_error, four.std_error);
}

TEST(Expectation, FailureCarriesSampleIndex) {
  auto estimator = [](const DisorderSample& s) -> double {
    if (s.index() == 13) throw std::runtime_error("boom");
    return 0.0;
  };
  try {
    qfd::expectation(chain(4, 1.0), estimator, 40, 3);
    FAIL() << "expected SampleError";
  } catch (const qfd::SampleError& e) {
    EXPECT_EQ(e.index(), 13u);
  }
}

TEST(Summarize, MatchesTwoPassFormula) {
  std::vector<double> xs{1.0, 4.0, 2.0, 8.0, 5.0};
  double mean = 4.0;
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= 4.0;
  auto est = qfd::summarize(xs);
  EXPECT_NEAR(est.mean, mean, 1e-15);
  EXPECT_NEAR(est.std_error, std::sqrt(var / 5.0), 1e-15);
  std::vector<double> single{3.0};
  EXPECT_TRUE(std::isinf(qfd::summarize(single).std_error));
}

}  // namespace
