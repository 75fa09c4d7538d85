#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qfd/disorder.hpp"
#include "qfd/experiments.hpp"
#include "qfd/operators.hpp"

namespace qfd::cli {

/// Every knob of a run. Defaults describe the reference setting: a 1D
/// Anderson chain of 64 sites at beta = 1, disorder 4, full spectral window.
struct RunConfig {
  int dimension = 1;
  int side = 64;
  int spins = 1;
  double beta = 1.0;
  double hopping = 1.0;
  double disorder = 4.0;
  bool window_full = true;
  double window_lower = 0.0;
  double window_upper = 0.0;
  double epsilon = 1.0;
  std::uint64_t seed = 0;
  std::size_t samples = 200;

  double R_start = 2.0;
  double R_stop = 20.0;
  double R_step = 1.0;
  double t_span = 20.0;
  double t_step = 0.5;
  std::vector<double> s_levels{0.0, 0.5, 1.0};

  std::size_t det_N = 3;
  std::size_t pf_N = 2;
  std::vector<int> det_shifts{1, 2, 3, 4, 5, 6, 8, 10, 12, 14, 16, 18, 20};
  std::vector<int> pf_spacings{2, 4, 6, 8, 10, 12, 14, 16, 18, 20};
  std::vector<int> pf_clusters{4, 10, 20, 30};
  std::string times = "strip";
  double t_range = 10.0;
  double safety_factor = 2.0;

  std::size_t hadamard_pairs = 50;
  double convexity_tol = 1e-6;
  double boundary_tol = 1e-8;

  DisorderModel model() const;
  EnergyWindow window() const;
  std::vector<double> R_grid() const;
  ZGrid z_grid() const;
  TimeScheme time_scheme() const;
};

/// Bad key or value; carries the key and, for file input, the line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& key, std::size_t line, const std::string& message);
  const std::string& key() const noexcept { return key_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string key_;
  std::size_t line_;
};

/// Keys accepted in config files and as --key overrides, in documentation order.
const std::vector<std::string>& config_keys();
std::string key_help(const std::string& key);

/// Sets one key from its text form. line = 0 means a command-line override.
void set_value(RunConfig& config, const std::string& key, const std::string& value, std::size_t line = 0);
/// Canonical text form of one key.
std::string get_value(const RunConfig& config, const std::string& key);

/// key = value lines, '#' starts a comment, blank lines ignored.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

/// Cross-field checks (ranges, grid shapes, box fits).
void validate(const RunConfig& config);

/// File values first, then overrides in order.
RunConfig load_config(const std::string& path, const std::vector<std::pair<std::string, std::string>>& overrides);

std::map<std::string, std::string> echo(const RunConfig& config);

}  // namespace qfd::cli
