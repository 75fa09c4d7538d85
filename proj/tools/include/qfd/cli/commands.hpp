#pragma once

#include <cstddef>
#include <string>

#include "qfd/cli/config.hpp"

namespace qfd::cli {

enum ExitCode : int { kPass = 0, kViolation = 1, kUsage = 2 };

struct RunOptions {
  std::string out_dir = ".";
  std::size_t threads = 1;
  std::string version;
};

int run_verify(const RunConfig& config, const RunOptions& options);
int run_condition(const RunConfig& config, const RunOptions& options);
int run_det_decay(const RunConfig& config, const RunOptions& options);
int run_pf_decay(const RunConfig& config, const RunOptions& options);
int run_hadamard(const RunConfig& config, const RunOptions& options);

/// Turns <out>/curve.csv and <out>/report.json into <out>/curve.dat and <out>/plot.gp.
int run_plot_data(const RunOptions& options);

}  // namespace qfd::cli
