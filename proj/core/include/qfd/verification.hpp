#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace qfd {

struct CheckResult {
  std::string name;
  bool passed = true;
  double worst = 0.0;      // largest observed discrepancy or ratio
  double tolerance = 0.0;
  std::size_t trials = 0;
  std::size_t failures = 0;
  std::string detail;
};

struct SuiteOptions {
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

/// Pseudometric axioms, partition inequalities and splitting width on random configurations.
std::vector<CheckResult> lattice_checks(const SuiteOptions& options);
/// Stable Fermi factor, scalar symbol bound, propagator at z = 0, unitarity of real-time evolution.
std::vector<CheckResult> operator_checks(const SuiteOptions& options);
/// Two-point kernels: defining form, norm bounds, field antisymmetry, agreement with the Fock oracle.
std::vector<CheckResult> kernel_checks(const SuiteOptions& options);

/// det of the time-ordered kernel matrix against the ordered Fock-space monomial.
CheckResult wick_determinant_suite(const SuiteOptions& options, std::size_t draws = 200);
/// Pfaffian of the field kernel matrix against the ordered Fock-space monomial.
CheckResult wick_pfaffian_suite(const SuiteOptions& options, std::size_t draws = 200);

struct BoundSuite {
  CheckResult det_universal;
  CheckResult pf_universal;
  CheckResult det_row_column;
  CheckResult pf_row_sum;
};

/// Universal and row bounds on random kernel matrices from norm-one vectors.
BoundSuite kernel_bound_suite(const SuiteOptions& options, std::size_t trials = 1000);

/// Pf^2 = det, stable vs combinatorial, Laplace expansions, row-swap antisymmetry.
std::vector<CheckResult> pfaffian_numerics_suite(const SuiteOptions& options);

/// Defining relation, CAR residuals, gauge invariance, KMS exchange.
std::vector<CheckResult> oracle_fidelity_suite(const SuiteOptions& options, std::size_t draws = 200);

struct HadamardSuiteOptions {
  std::size_t pairs = 50;
  std::size_t interior_samples = 20;
  double beta = 1.0;
  double span_factor = 8.0;      // grid span in units of beta
  double spacing_factor = 0.125;  // grid spacing in units of beta
  std::size_t refine_starts = 8;
  double convexity_tol = 1e-6;
  double boundary_tol = 1e-8;
};

/// Midpoint convexity of ln sup |Upsilon| and the boundary maximum principle.
std::vector<CheckResult> hadamard_suite(const SuiteOptions& options, const HadamardSuiteOptions& h = {});

/// Everything `verify` runs: lattice, operators, kernels, pfadet and fock suites.
std::vector<CheckResult> verify_all(const SuiteOptions& options);

}  // namespace qfd
