#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "qfd/lattice.hpp"
#include "qfd/operators.hpp"

namespace qfd {

/// Anderson model on a box: nearest-neighbour hopping -t with open boundary,
/// plus strength * v_x on site x, v_x i.i.d. uniform on [-1, 1] and shared by
/// all spin components of the site.
struct DisorderModel {
  Box box{1, 64, 1};
  double hopping = 1.0;
  double strength = 4.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Seed of the random stream for one sample, a bijective mix of (seed, index).
std::uint64_t sample_stream_key(std::uint64_t master_seed, std::uint64_t index) noexcept;

/// The on-site values v_x (one per site, before scaling by the strength).
std::vector<double> onsite_potential(const DisorderModel& model, std::size_t index);

HermitianOperator sample_hamiltonian(const DisorderModel& model, std::size_t index);

/// One disorder realisation. The Hamiltonian is assembled on first request.
class DisorderSample {
 public:
  DisorderSample(const DisorderModel& model, std::size_t index);

  std::size_t index() const noexcept { return index_; }
  const DisorderModel& model() const noexcept { return *model_; }
  const std::vector<double>& potential() const noexcept { return potential_; }
  const HermitianOperator& hamiltonian() const;

 private:
  const DisorderModel* model_;
  std::size_t index_;
  std::vector<double> potential_;
  mutable std::optional<HermitianOperator> hamiltonian_;
};

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t count = 0;
};

/// Mean and standard error (sample stddev / sqrt(n)) of the values, one pass,
/// in the given order. A single value gives an infinite standard error.
MonteCarloEstimate summarize(std::span<const double> values);

using ScalarEstimator = std::function<double(const DisorderSample&)>;
using VectorEstimator = std::function<std::vector<double>(const DisorderSample&)>;

/// Disorder average over samples 0..n_samples-1. Samples run in parallel, the
/// reduction runs in sample order, so the result does not depend on `threads`.
/// Any estimator failure is rethrown as SampleError carrying the sample index.
MonteCarloEstimate expectation(const DisorderModel& model, const ScalarEstimator& estimator,
                               std::size_t n_samples, std::size_t threads = 1);

/// Componentwise version; every call of the estimator must return the same length.
std::vector<MonteCarloEstimate> expectation(const DisorderModel& model,
                                            const VectorEstimator& estimator,
                                            std::size_t n_samples, std::size_t threads = 1);

}  // namespace qfd
