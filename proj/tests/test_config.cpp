#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "qfd/cli/config.hpp"

namespace {

using qfd::cli::ConfigError;
using qfd::cli::RunConfig;

std::string write_temp(const std::string& name, const std::string& text) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path.string();
}

TEST(Config, EmptyTextGivesDefaults) {
  RunConfig c = qfd::cli::parse_config_text("");
  EXPECT_EQ(c.dimension, 1);
  EXPECT_EQ(c.side, 64);
  EXPECT_EQ(c.spins, 1);
  EXPECT_EQ(c.beta, 1.0);
  EXPECT_EQ(c.disorder, 4.0);
  EXPECT_EQ(c.epsilon, 1.0);
  EXPECT_TRUE(c.window_full);
  EXPECT_EQ(c.seed, 0u);
}

TEST(Config, EpsilonAboveOneIsRejected) {
  try {
    qfd::cli::parse_config_text("epsilon = 1.5\n");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "epsilon");
    EXPECT_EQ(e.line(), 1u);
    EXPECT_NE(std::string(e.what()).find("epsilon must lie in (0,1]"), std::string::npos);
  }
}

TEST(Config, CommentsBlankLinesAndValues) {
  RunConfig c = qfd::cli::parse_config_text(
      "# reference run\n\nside = 32   # shorter chain\nwindow = -1,2\nR_grid = 1:9:2\ns_levels = 0,1\n");
  EXPECT_EQ(c.side, 32);
  EXPECT_FALSE(c.window_full);
  EXPECT_EQ(c.window_lower, -1.0);
  EXPECT_EQ(c.window_upper, 2.0);
  EXPECT_EQ(c.R_grid(), (std::vector<double>{1, 3, 5, 7, 9}));
  EXPECT_EQ(c.z_grid().s_fractions, (std::vector<double>{0, 1}));
}

TEST(Config, UnknownKeyAndBadValueReportLine) {
  try {
    qfd::cli::parse_config_text("beta = 1\nbogus = 3\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "bogus");
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(qfd::cli::parse_config_text("beta = -1\n"), ConfigError);
  EXPECT_THROW(qfd::cli::parse_config_text("samples = many\n"), ConfigError);
  EXPECT_THROW(qfd::cli::parse_config_text("times = sideways\n"), ConfigError);
  EXPECT_THROW(qfd::cli::parse_config_text("side\n"), ConfigError);
}

TEST(Config, OverrideBeatsFileValue) {
  auto path = write_temp("qfd_config_override.cfg", "beta = 2\nseed = 5\n");
  RunConfig c = qfd::cli::load_config(path, {{"beta", "3.5"}});
  EXPECT_EQ(c.beta, 3.5);
  EXPECT_EQ(c.seed, 5u);
  std::filesystem::remove(path);
}

TEST(Config, OverrideErrorsNameTheFlag) {
  try {
    qfd::cli::load_config("", {{"epsilon", "0"}});
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 0u);
    EXPECT_NE(std::string(e.what()).find("override 'epsilon'"), std::string::npos);
  }
}

TEST(Config, EveryKeyRoundTripsThroughText) {
  RunConfig c = qfd::cli::parse_config_text("window = 0.5,1.5\ntimes = boundary\ndet_shifts = 2,4\n");
  std::string text;
  for (const auto& key : qfd::cli::config_keys()) text += key + " = " + qfd::cli::get_value(c, key) + "\n";
  RunConfig back = qfd::cli::parse_config_text(text);
  for (const auto& key : qfd::cli::config_keys()) {
    EXPECT_EQ(qfd::cli::get_value(back, key), qfd::cli::get_value(c, key)) << key;
    EXPECT_FALSE(qfd::cli::key_help(key).empty()) << key;
  }
  EXPECT_EQ(qfd::cli::echo(back).size(), qfd::cli::config_keys().size());
}

TEST(Config, CrossFieldValidation) {
  RunConfig c;
  c.side = 8;
  EXPECT_THROW(qfd::cli::validate(c), ConfigError);  // default shifts do not fit
}

}  // namespace
