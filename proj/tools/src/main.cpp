#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "qfd/cli/commands.hpp"
#include "qfd/cli/config.hpp"
#include "qfd/errors.hpp"
#include "qfd/parallel.hpp"

#ifndef QFD_VERSION
#define QFD_VERSION "unknown"
#endif

int main(int argc, char** argv) {
  using namespace qfd::cli;
  CLI::App app{"Quasi-free fermion decay laboratory"};
  app.require_subcommand(1);
  app.set_version_flag("--version", QFD_VERSION);

  std::string config_path;
  std::string out_dir = ".";
  std::size_t threads = 0;
  std::string seed;
  app.add_option("--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory for curve.csv and report.json");
  app.add_option("--threads", threads, "worker threads (default: QFD_THREADS or hardware concurrency)");
  app.add_option("--seed", seed, "master seed");

  std::vector<std::pair<std::string, std::string>> overrides;
  std::vector<std::string> values(config_keys().size());
  for (std::size_t i = 0; i < config_keys().size(); ++i) {
    const auto& key = config_keys()[i];
    if (key == "seed") continue;
    app.add_option("--" + key, values[i], key_help(key));
  }

  struct Sub {
    const char* name;
    const char* help;
  };
  const Sub subs[] = {{"verify", "invariant and identity suite"},
                      {"condition", "localization curve and decay fit"},
                      {"det-decay", "determinant decay in Hausdorff distance"},
                      {"pf-decay", "Pfaffian decay in splitting width"},
                      {"hadamard", "convexity and boundary-maximum checks"},
                      {"plot-data", "gnuplot data from an existing output directory"}};
  for (const auto& s : subs) app.add_subcommand(s.name, s.help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  RunOptions options;
  options.out_dir = out_dir;
  options.threads = threads > 0 ? threads : qfd::default_thread_count();
  options.version = QFD_VERSION;
  if (command == "plot-data") return run_plot_data(options);

  RunConfig config;
  try {
    if (!seed.empty()) overrides.emplace_back("seed", seed);
    for (std::size_t i = 0; i < config_keys().size(); ++i) {
      const auto& key = config_keys()[i];
      if (app.count("--" + key) > 0 && key != "seed") overrides.emplace_back(key, values[i]);
    }
    config = load_config(config_path, overrides);
  } catch (const std::exception& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (command == "verify") return run_verify(config, options);
    if (command == "condition") return run_condition(config, options);
    if (command == "det-decay") return run_det_decay(config, options);
    if (command == "pf-decay") return run_pf_decay(config, options);
    return run_hadamard(config, options);
  } catch (const qfd::ParameterError& e) {
    std::cerr << command << ": " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << command << ": " << e.what() << '\n';
    return kViolation;
  }
}
