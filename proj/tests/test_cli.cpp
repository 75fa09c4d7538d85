#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <sys/wait.h>

namespace {

namespace fs = std::filesystem;

const std::string kSmall =
    " --side 24 --samples 20 --R_grid 2:8:1 --t_span 5 --det_shifts 1,2,4,6"
    " --pf_spacings 2,4 --pf_clusters 4,10";

struct Outcome {
  int exit_code;
  std::string out;
};

Outcome qfd(const std::string& args) {
  std::string cmd = std::string(QFD_BINARY) + " " + args + " 2>/dev/null";
  Outcome r{-1, {}};
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe)) r.out += buf;
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("qfd_cli_" + name);
  fs::remove_all(p);
  return p;
}

TEST(Cli, VerifyPassesOnDefaults) {
  auto dir = scratch("verify");
  Outcome r = qfd("--out " + dir.string() + " verify");
  EXPECT_EQ(r.exit_code, 0) << r.out;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos) << r.out;
  EXPECT_TRUE(fs::exists(dir / "report.json"));
}

TEST(Cli, ConditionIsByteIdenticalAcrossRunsAndThreads) {
  auto a = scratch("cond_a"), b = scratch("cond_b");
  Outcome ra = qfd("--threads 1 --out " + a.string() + kSmall + " condition");
  Outcome rb = qfd("--threads 3 --out " + b.string() + kSmall + " condition");
  EXPECT_EQ(ra.exit_code, 0) << ra.out;
  EXPECT_EQ(rb.exit_code, 0) << rb.out;
  EXPECT_EQ(slurp(a / "curve.csv"), slurp(b / "curve.csv"));
  EXPECT_EQ(slurp(a / "report.json"), slurp(b / "report.json"));
  EXPECT_EQ(slurp(a / "curve.csv").rfind("R,mean,stderr,n\n", 0), 0u);
}

TEST(Cli, DetDecayWithDisjointWindowPassesTrivially) {
  auto dir = scratch("det_disjoint");
  // The fit comes from the full-window curve, so only the experiment sees the window.
  Outcome r = qfd("--out " + dir.string() + kSmall + " --window 100,101 det-decay");
  EXPECT_EQ(r.exit_code, 0) << r.out;
  std::string csv = slurp(dir / "curve.csv");
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  while (std::getline(lines, line)) {
    auto first = line.find(',');
    auto second = line.find(',', first + 1);
    EXPECT_EQ(std::stod(line.substr(first + 1, second - first - 1)), 0.0) << line;
  }
}

TEST(Cli, PfDecayAndPlotData) {
  auto dir = scratch("pf");
  Outcome r = qfd("--out " + dir.string() + kSmall + " pf-decay");
  EXPECT_EQ(r.exit_code, 0) << r.out;
  EXPECT_NE(r.out.find("PASS pfaffian-decay-bound"), std::string::npos) << r.out;
  Outcome p = qfd("--out " + dir.string() + " plot-data");
  EXPECT_EQ(p.exit_code, 0);
  EXPECT_TRUE(fs::exists(dir / "curve.dat"));
  EXPECT_TRUE(fs::exists(dir / "plot.gp"));
}

TEST(Cli, UsageErrorsExitWithTwo) {
  EXPECT_EQ(qfd("--epsilon 1.5 verify").exit_code, 2);
  EXPECT_EQ(qfd("no-such-command").exit_code, 2);
  EXPECT_EQ(qfd("--config /nonexistent/qfd.cfg verify").exit_code, 2);
}

TEST(Cli, ConfigFileAndOverridePrecedence) {
  auto dir = scratch("cfg");
  fs::create_directories(dir);
  std::ofstream(dir / "run.cfg") << "# from file\nbeta = 2\nseed = 9\n";
  Outcome r = qfd("--config " + (dir / "run.cfg").string() + " --beta 0.5 --out " + dir.string() + kSmall + " condition");
  EXPECT_EQ(r.exit_code, 0) << r.out;
  std::string report = slurp(dir / "report.json");
  EXPECT_NE(report.find("\"beta\": \"0.5\""), std::string::npos);
  EXPECT_NE(report.find("\"seed\": \"9\""), std::string::npos);
  std::ofstream(dir / "bad.cfg") << "epsilon = 1.5\n";
  EXPECT_EQ(qfd("--config " + (dir / "bad.cfg").string() + " condition").exit_code, 2);
}

}  // namespace
