#include <benchmark/benchmark.h>

#include <vector>

#include "qfd/disorder.hpp"
#include "qfd/experiments.hpp"
#include "qfd/fock.hpp"
#include "qfd/hadamard.hpp"
#include "qfd/pfadet.hpp"
#include "qfd/sampling.hpp"

namespace {

static void BM_Determinant(benchmark::State& state) {
  qfd::Sampler rng(1);
  const auto n = static_cast<Eigen::Index>(state.range(0));
  qfd::CMatrix m = qfd::CMatrix::NullaryExpr(n, n, [&] { return rng.complex_normal(); });
  for (auto _ : state) benchmark::DoNotOptimize(qfd::determinant(m));
}
BENCHMARK(BM_Determinant)->Arg(6)->Arg(32)->Arg(128);

static void BM_PfaffianStable(benchmark::State& state) {
  qfd::Sampler rng(2);
  qfd::CMatrix m = rng.skew(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(qfd::pfaffian(m));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PfaffianStable)->RangeMultiplier(2)->Range(4, 128)->Complexity(benchmark::oNCubed);

static void BM_PfaffianCombinatorial(benchmark::State& state) {
  qfd::Sampler rng(3);
  qfd::CMatrix m = rng.skew(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(qfd::pfaffian(m, qfd::PfaffianMethod::combinatorial));
}
BENCHMARK(BM_PfaffianCombinatorial)->DenseRange(2, 8, 2);

// Fresh operator each iteration so the cached decomposition is not reused.
static void BM_Eigendecomposition(benchmark::State& state) {
  qfd::Sampler rng(4);
  qfd::CMatrix h = rng.hermitian(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    qfd::HermitianOperator op(h);
    benchmark::DoNotOptimize(op.eigenvalues().data());
  }
}
BENCHMARK(BM_Eigendecomposition)->Arg(16)->Arg(64)->Arg(256);

static void BM_GibbsExpectation(benchmark::State& state) {
  qfd::Sampler rng(5);
  const auto modes = static_cast<std::size_t>(state.range(0));
  qfd::FockRep rep(qfd::HermitianOperator(rng.hermitian(modes)));
  qfd::OrderedMonomial mono;
  const qfd::Flavor kinds[] = {qfd::Flavor::creation, qfd::Flavor::creation, qfd::Flavor::annihilation,
                               qfd::Flavor::annihilation};
  for (auto kind : kinds) mono.factors.push_back({kind, rng.unit_vector(modes), rng.strip_time(1.0, 2.0)});
  mono.positions = {0, 1, 2, 3};
  for (auto _ : state) benchmark::DoNotOptimize(qfd::gibbs_expectation(rep, 1.0, mono));
}
BENCHMARK(BM_GibbsExpectation)->DenseRange(4, 10, 2);

static void BM_UpsilonWick(benchmark::State& state) {
  qfd::Sampler rng(6);
  qfd::HermitianOperator h(rng.integer_spectrum_hermitian(4, 2));
  std::vector<qfd::CVector> phis;
  for (int k = 0; k < 4; ++k) phis.push_back(rng.unit_vector(4));
  qfd::Upsilon ups(h, 1.0, phis, {2, 0, 3, 1});
  std::vector<qfd::cplx> xi{{0.1, -0.2}, {0.7, -0.1}, {-0.3, -0.3}, {1.1, -0.1}};
  for (auto _ : state) benchmark::DoNotOptimize(ups(xi));
}
BENCHMARK(BM_UpsilonWick);

// One disorder sample of the localization curve at the reference size.
static void BM_ConditionCurveSample(benchmark::State& state) {
  qfd::DisorderModel model;
  model.box = qfd::Box(1, static_cast<int>(state.range(0)), 1);
  qfd::CurveSettings settings;
  for (int r = 2; r <= 20; ++r) settings.R_grid.push_back(r);
  settings.samples = 2;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    model.seed = seed++;
    benchmark::DoNotOptimize(qfd::condition_local_curve(model, model.box.center(), settings));
  }
  state.SetItemsProcessed(state.iterations() * 2);
}
BENCHMARK(BM_ConditionCurveSample)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
