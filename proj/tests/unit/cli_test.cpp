#include <gtest/gtest.h>

#include <sstream>

#include "commands.hpp"
#include "temp_file.hpp"

using namespace redmon::cli;

TEST(Cli, PresetsListsEveryName) {
  std::ostringstream out;
  EXPECT_EQ(presets(out), ok);
  EXPECT_NE(out.str().find("HF\n"), std::string::npos);
  EXPECT_NE(out.str().find("GWF\n"), std::string::npos);
}

TEST(Cli, RunWritesJsonToStdout) {
  std::ostringstream out, err;
  RunOptions opt;
  opt.scenario = "control-clean";
  opt.seeds = {1};
  EXPECT_EQ(run(opt, out, err), ok) << err.str();
  EXPECT_EQ(out.str().rfind("{", 0), 0u);
  EXPECT_NE(out.str().find("\"prr_redundant\""), std::string::npos);
}

TEST(Cli, RunWritesCsvToFile) {
  TempFile f("out.csv");
  std::ostringstream out, err;
  RunOptions opt;
  opt.scenario = "baseline";
  opt.seeds = {2};
  opt.format = "csv";
  opt.out = f.path();
  EXPECT_EQ(run(opt, out, err), ok) << err.str();
  EXPECT_TRUE(out.str().empty());
  EXPECT_EQ(f.read().rfind("scenario,iteration,metric,value\n", 0), 0u);
}

TEST(Cli, ConfigProblemsExitWithOne) {
  std::ostringstream out, err;
  RunOptions opt;
  opt.scenario = "no-such-preset";
  EXPECT_EQ(run(opt, out, err), config_error);
  opt.scenario = "baseline";
  opt.format = "xml";
  EXPECT_EQ(run(opt, out, err), config_error);
  TempFile bad("bad.cfg", "preset = HF\nmac.nonsense = 3\n");
  opt.format = "json";
  opt.scenario = bad.path();
  err.str("");
  EXPECT_EQ(run(opt, out, err), config_error);
  EXPECT_NE(err.str().find("mac.nonsense"), std::string::npos);
}

TEST(Cli, UnwritableOutputExitsWithTwo) {
  std::ostringstream out, err;
  RunOptions opt;
  opt.scenario = "control-clean";
  opt.seeds = {1};
  opt.out = "/nonexistent-dir/out.json";
  EXPECT_EQ(run(opt, out, err), runtime_error);
}

TEST(Cli, AvailPrintsTable) {
  std::ostringstream out, err;
  AvailOptions opt;
  EXPECT_EQ(avail(opt, out, err), ok);
  EXPECT_EQ(out.str(), "N  pi0\n1  4.777e-03\n2  4.565e-05\n3  6.543e-07\n4  1.250e-08\n");
}

TEST(Cli, AvailRejectsBadInput) {
  std::ostringstream out, err;
  AvailOptions opt;
  opt.lambda = -1.0;
  EXPECT_EQ(avail(opt, out, err), config_error);
  opt = {};
  opt.n_max = 0;
  EXPECT_EQ(avail(opt, out, err), config_error);
  opt = {};
  opt.format = "yaml";
  EXPECT_EQ(avail(opt, out, err), config_error);
}
