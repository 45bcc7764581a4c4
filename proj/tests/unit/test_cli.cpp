#include <gtest/gtest.h>

#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "skiptrack/io.hpp"

namespace fs = std::filesystem;
using skiptrack::read_text;
using skiptrack::cli::run;

namespace {

struct CliTest : ::testing::Test {
  fs::path root;
  std::ostringstream log;

  void SetUp() override {
    root = fs::temp_directory_path() /
           ("skiptrack_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(root);
  }
  void TearDown() override { fs::remove_all(root); }

  int call(std::vector<std::string> args) { return run(args, log); }
  std::string p(const std::string& rel) const { return (root / rel).string(); }

  static std::map<std::string, std::string> snapshot_dir(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(dir))
      if (e.is_regular_file()) out[fs::relative(e.path(), dir).string()] = read_text(e.path());
    return out;
  }
};

}  // namespace

TEST_F(CliTest, SimulateIsByteIdenticalAcrossReruns) {
  ASSERT_EQ(call({"simulate", "--seed", "5", "--n", "100", "--out", p("a")}), 0);
  ASSERT_EQ(call({"simulate", "--seed", "5", "--n", "100", "--out", p("b")}), 0);
  auto a = snapshot_dir(root / "a"), b = snapshot_dir(root / "b");
  a.erase(skiptrack::cli::kSnapshotName);
  b.erase(skiptrack::cli::kSnapshotName);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.size(), 3u);
}

TEST_F(CliTest, MixtureScenarioHasTwentyCovariates) {
  ASSERT_EQ(call({"simulate", "--seed", "1", "--scenario", "3", "--n", "10", "--out", p("s3")}), 0);
  const std::string head = read_text(root / "s3" / "baseline.csv").substr(0, read_text(root / "s3" / "baseline.csv").find('\n'));
  EXPECT_EQ(head.find("z_22"), std::string::npos);
  EXPECT_NE(head.find("z_21"), std::string::npos);  // intercept column z_1 plus 20 covariates
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(call({"simulate", "--seed", "1", "--scenario", "9", "--out", p("x")}), 2);
  EXPECT_EQ(call({"simulate", "--n", "10", "--out", p("x")}), 2);
  EXPECT_EQ(call({"fit", "--out", p("x"), "--cycles-file", "a.csv", "--baseline-file", "b.csv"}), 2);
  EXPECT_EQ(call({"frobnicate"}), 2);
  EXPECT_EQ(call({"simulate", "--seed", "x1", "--out", p("x")}), 2);
}

TEST_F(CliTest, ConfigFileWithOverrides) {
  fs::create_directories(root);
  skiptrack::atomic_write(root / "cfg.json", R"({"command": "simulate", "seed": 3, "n": 12, "cycles": 4})");
  ASSERT_EQ(call({"simulate", "--config", p("cfg.json"), "--n", "7", "--out", p("o")}), 0);
  const std::string snap = read_text(root / "o" / skiptrack::cli::kSnapshotName);
  EXPECT_NE(snap.find("\"n\": 7"), std::string::npos);
  EXPECT_NE(snap.find("\"cycles\": 4"), std::string::npos);
  skiptrack::atomic_write(root / "bad.json", R"({"seed": 3, "colour": "red"})");
  EXPECT_EQ(call({"simulate", "--config", p("bad.json"), "--out", p("o2")}), 2);
  EXPECT_EQ(call({"fit", "--config", p("cfg.json"), "--out", p("o3")}), 2);
}

TEST_F(CliTest, TinyFitEmitsEveryOutputAndFilters) {
  ASSERT_EQ(call({"simulate", "--seed", "2", "--n", "5", "--cycles", "3", "--out", p("d")}), 0);
  ASSERT_EQ(call({"fit", "--seed", "9", "--cycles-file", p("d/cycles.csv"), "--baseline-file", p("d/baseline.csv"),
                  "--chains", "2", "--iter", "200", "--burn-in", "50", "--filter=false", "--out", p("f")}),
            0);
  for (const char* f : {"draws.csv", "summary.csv", "chains.csv", "skips.csv", "individuals.csv", "histogram.csv",
                        skiptrack::cli::kSnapshotName})
    EXPECT_TRUE(fs::exists(root / "f" / f)) << f;

  skiptrack::atomic_write(root / "c.csv",
                          "individual_id,cycle_index,cycle_length,x_1\nA,1,28,1\nA,2,95,1\nB,1,30,1\nB,2,5,1\nB,3,31,1\n");
  skiptrack::atomic_write(root / "b.csv", "individual_id,z_1\nA,1\nB,1\n");
  log.str("");
  ASSERT_EQ(call({"fit", "--seed", "1", "--cycles-file", p("c.csv"), "--baseline-file", p("b.csv"), "--chains", "1",
                  "--iter", "50", "--burn-in", "10", "--out", p("g")}),
            0);
  EXPECT_NE(log.str().find("dropped 2 cycles"), std::string::npos) << log.str();
  EXPECT_EQ(read_text(root / "g" / "histogram.csv"), "day,count\n28,1\n29,0\n30,1\n31,1\n");
}

TEST_F(CliTest, RerunFromSnapshotReproducesOutputs) {
  ASSERT_EQ(call({"simulate", "--seed", "4", "--n", "12", "--cycles", "5", "--out", p("d")}), 0);
  ASSERT_EQ(call({"fit", "--seed", "9", "--cycles-file", p("d/cycles.csv"), "--baseline-file", p("d/baseline.csv"),
                  "--chains", "2", "--iter", "100", "--burn-in", "20", "--threads", "2", "--out", p("f")}),
            0);
  const auto first = snapshot_dir(root / "f");
  ASSERT_EQ(call({"fit", "--config", p("f/resolved_config.json")}), 0);
  EXPECT_EQ(snapshot_dir(root / "f"), first);
}

TEST_F(CliTest, WaspWithOneSubsetMatchesFit) {
  ASSERT_EQ(call({"simulate", "--seed", "4", "--n", "12", "--cycles", "5", "--out", p("d")}), 0);
  const std::vector<std::string> common{"--seed", "9", "--cycles-file", p("d/cycles.csv"), "--baseline-file",
                                        p("d/baseline.csv"), "--chains", "2", "--iter", "100", "--burn-in", "20"};
  auto fit = common;
  fit.insert(fit.begin(), "fit");
  fit.insert(fit.end(), {"--out", p("f")});
  auto wasp = common;
  wasp.insert(wasp.begin(), "wasp");
  wasp.insert(wasp.end(), {"--k-part", "1", "--draws-out", "50", "--out", p("w")});
  ASSERT_EQ(call(fit), 0);
  ASSERT_EQ(call(wasp), 0);
  const auto f = skiptrack::read_draws(root / "f" / "draws.csv").samples;
  const auto w = skiptrack::read_draws(root / "w" / "subsets" / "subset_1.csv").samples;
  for (std::size_t c = 0; c < 2; ++c)
    for (std::size_t t = 0; t < f.chains[c].num_draws; ++t)
      for (std::size_t k = 0; k < w.dim(); ++k)
        ASSERT_EQ(w.chains[c].values[t * w.dim() + k], f.chains[c].values[t * f.dim() + k]);
  EXPECT_NE(read_text(root / "w" / "subsets.csv").find("1,12,"), std::string::npos);
}

TEST_F(CliTest, ReplicateWritesTables) {
  ASSERT_EQ(call({"replicate", "--seed", "1", "--n", "20", "--replicates", "2", "--cycles", "5", "--chains", "1",
                  "--iter", "60", "--burn-in", "20", "--out", p("r")}),
            0);
  const std::string bias = read_text(root / "r" / "bias_table.csv");
  EXPECT_EQ(bias.substr(0, bias.find('\n')),
            "parameter,n,full_bias,full_width,full_coverage,fixed_bias,fixed_width,fixed_coverage");
  const std::string err = read_text(root / "r" / "error_table.csv");
  EXPECT_EQ(err.substr(0, err.find('\n')), "block,n,full_type1,full_type2,fixed_type1,fixed_type2");
  EXPECT_TRUE(fs::exists(root / "r" / "attenuation.csv"));
  EXPECT_TRUE(fs::exists(root / "r" / "records" / "fixed_n20.csv"));
}

TEST_F(CliTest, DiagnoseResummarizes) {
  ASSERT_EQ(call({"simulate", "--seed", "4", "--n", "10", "--cycles", "4", "--out", p("d")}), 0);
  ASSERT_EQ(call({"fit", "--seed", "9", "--cycles-file", p("d/cycles.csv"), "--baseline-file", p("d/baseline.csv"),
                  "--chains", "2", "--iter", "80", "--burn-in", "20", "--out", p("f")}),
            0);
  ASSERT_EQ(call({"diagnose", "--draws-file", p("f/draws.csv"), "--out", p("g")}), 0);
  EXPECT_EQ(read_text(root / "g" / "summary.csv"), read_text(root / "f" / "summary.csv"));
  EXPECT_EQ(call({"diagnose", "--draws-file", p("nope.csv"), "--out", p("h")}), 1);
}
