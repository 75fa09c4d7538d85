#include "qfd/disorder.hpp"

#include <cmath>
#include <exception>
#include <limits>
#include <random>

#include "qfd/errors.hpp"
#include "qfd/parallel.hpp"

namespace qfd {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Uniform on [-1, 1) from the top 53 bits.
double symmetric_unit(std::uint64_t bits) noexcept {
  const double u = static_cast<double>(bits >> 11) * 0x1.0p-53;
  return 2.0 * u - 1.0;
}

}  // namespace

void DisorderModel::validate() const {
  if (!(strength >= 0.0) || !std::isfinite(strength)) {
    throw ParameterError("disorder strength must be finite and >= 0");
  }
  if (!std::isfinite(hopping)) throw ParameterError("hopping must be finite");
}

std::uint64_t sample_stream_key(std::uint64_t master_seed, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(master_seed) ^ splitmix64(index ^ 0xD1B54A32D192ED03ULL));
}

std::vector<double> onsite_potential(const DisorderModel& model, std::size_t index) {
  std::mt19937_64 engine(sample_stream_key(model.seed, index));
  std::vector<double> v(model.box.sites());
  for (auto& x : v) x = symmetric_unit(engine());
  return v;
}

namespace {

HermitianOperator assemble(const DisorderModel& model, const std::vector<double>& potential) {
  const Box& box = model.box;
  const auto n = static_cast<Eigen::Index>(box.one_particle_dimension());
  const int spins = box.spins();
  CMatrix h = CMatrix::Zero(n, n);
  for (std::size_t site = 0; site < box.sites(); ++site) {
    Point x = box.site(site);
    for (int sigma = 0; sigma < spins; ++sigma) {
      const auto i = static_cast<Eigen::Index>(box.index(x, sigma));
      h(i, i) = model.strength * potential[site];
    }
    for (int axis = 0; axis < box.dimension(); ++axis) {
      Point y = x;
      ++y[axis];
      if (!box.contains(y)) continue;
      for (int sigma = 0; sigma < spins; ++sigma) {
        const auto i = static_cast<Eigen::Index>(box.index(x, sigma));
        const auto j = static_cast<Eigen::Index>(box.index(y, sigma));
        h(i, j) = -model.hopping;
        h(j, i) = -model.hopping;
      }
    }
  }
  return HermitianOperator(std::move(h));
}

}  // namespace

HermitianOperator sample_hamiltonian(const DisorderModel& model, std::size_t index) {
  model.validate();
  return assemble(model, onsite_potential(model, index));
}

DisorderSample::DisorderSample(const DisorderModel& model, std::size_t index)
    : model_(&model), index_(index), potential_(onsite_potential(model, index)) {}

const HermitianOperator& DisorderSample::hamiltonian() const {
  if (!hamiltonian_) hamiltonian_.emplace(assemble(*model_, potential_));
  return *hamiltonian_;
}

MonteCarloEstimate summarize(std::span<const double> values) {
  MonteCarloEstimate est;
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t n = 0;
  for (double v : values) {
    ++n;
    const double delta = v - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (v - mean);
  }
  est.count = n;
  est.mean = mean;
  if (n >= 2) {
    const double var = std::max(0.0, m2 / static_cast<double>(n - 1));
    est.std_error = std::sqrt(var / static_cast<double>(n));
  } else {
    est.std_error = std::numeric_limits<double>::infinity();
  }
  return est;
}

namespace {

template <class Body>
void run_samples(const DisorderModel& model, std::size_t n_samples, std::size_t threads, Body&& body) {
  model.validate();
  parallel_for(n_samples, threads, [&](std::size_t i) {
    try {
      DisorderSample sample(model, i);
      body(i, sample);
    } catch (const SampleError&) {
      throw;
    } catch (const std::exception& e) {
      throw SampleError(i, e.what());
    }
  });
}

}  // namespace

MonteCarloEstimate expectation(const DisorderModel& model, const ScalarEstimator& estimator,
                               std::size_t n_samples, std::size_t threads) {
  if (n_samples < 2) throw ParameterError("expectation needs at least two samples");
  std::vector<double> values(n_samples);
  run_samples(model, n_samples, threads,
              [&](std::size_t i, const DisorderSample& s) { values[i] = estimator(s); });
  return summarize(values);
}

std::vector<MonteCarloEstimate> expectation(const DisorderModel& model,
                                            const VectorEstimator& estimator,
                                            std::size_t n_samples, std::size_t threads) {
  if (n_samples < 2) throw ParameterError("expectation needs at least two samples");
  std::vector<std::vector<double>> rows(n_samples);
  run_samples(model, n_samples, threads,
              [&](std::size_t i, const DisorderSample& s) { rows[i] = estimator(s); });
  const std::size_t width = rows.front().size();
  std::vector<MonteCarloEstimate> out(width);
  std::vector<double> column(n_samples);
  for (std::size_t c = 0; c < width; ++c) {
    for (std::size_t i = 0; i < n_samples; ++i) {
      if (rows[i].size() != width) throw SampleError(i, "estimator returned a vector of different length");
      column[i] = rows[i][c];
    }
    out[c] = summarize(column);
  }
  return out;
}

}  // namespace qfd
