#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "sarve/dataset_gen.hpp"
#include "sarve/dataset_io.hpp"

namespace fs = std::filesystem;

namespace sarve {
namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("sarve_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return cli::run(args, out_, err_);
  }

  std::string gen(const std::string& sub, std::vector<std::string> extra = {}) {
    const fs::path out = dir_ / sub;
    std::vector<std::string> args{"gen-dataset", "--out", out.string()};
    args.insert(args.end(), extra.begin(), extra.end());
    EXPECT_EQ(run(args), cli::kExitOk) << err_.str();
    return (out / "dataset.txt").string();
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({}), cli::kExitUsage);
  EXPECT_EQ(run({"frobnicate"}), cli::kExitUsage);
  EXPECT_EQ(run({"recommend"}), cli::kExitUsage);
  EXPECT_EQ(run({"sweep", "--dataset", "x"}), cli::kExitUsage);
  const auto ds = gen("a");
  EXPECT_EQ(run({"recommend", "--dataset", ds, "--gamma", "2", "--out", dir_.string()}),
            cli::kExitUsage);
  EXPECT_EQ(run({"sweep", "--dataset", ds, "--axis", "gamma", "--grid", "0.9,0.1", "--out",
                 dir_.string()}),
            cli::kExitUsage);
}

TEST_F(CliTest, DataErrors) {
  EXPECT_EQ(run({"recommend", "--dataset", (dir_ / "missing.txt").string()}), cli::kExitData);
  const fs::path bad = dir_ / "bad.txt";
  std::ofstream(bad) << "[meta]\nt_total 720\n[items]\nk1\n[persons]\nx participant\n"
                        "[ratings]\nx k1 9\n";
  EXPECT_EQ(run({"recommend", "--dataset", bad.string(), "--out", dir_.string()}), cli::kExitData);
  EXPECT_NE(err_.str().find("rating in [1,5]"), std::string::npos);
}

TEST_F(CliTest, RecommendIsDeterministicAndLeavesInputAlone) {
  const auto ds = gen("g");
  const std::string before = slurp(ds);
  const fs::path a = dir_ / "ra", b = dir_ / "rb";
  ASSERT_EQ(run({"recommend", "--dataset", ds, "--out", a.string(), "--explain"}), 0) << err_.str();
  ASSERT_EQ(run({"recommend", "--dataset", ds, "--out", b.string(), "--workers", "4", "--explain"}), 0);
  for (const char* f : {"recommendations.tsv", "schedule.tsv", "explanations.txt"}) {
    ASSERT_TRUE(fs::exists(a / f)) << f;
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
    EXPECT_EQ(slurp(a / f).rfind("# config {", 0), 0u) << f;
  }
  EXPECT_EQ(slurp(ds), before);
}

TEST_F(CliTest, GeneratedDatasetIsReproducible) {
  const auto a = gen("s1", {"--seed", "5"});
  const auto b = gen("s2", {"--seed", "5"});
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_TRUE(validate_dataset(load_dataset(a)).ok());
  EXPECT_TRUE(fs::exists(fs::path(a).parent_path() / "dataset.provenance.json"));
}

TEST_F(CliTest, SweepGridPoints) {
  const auto ds = gen("w");
  const fs::path out = dir_ / "sw";
  ASSERT_EQ(run({"sweep", "--dataset", ds, "--axis", "gamma", "--grid", "0.6:1.0:0.1", "--out",
                 out.string(), "--emit-plot-data"}),
            0)
      << err_.str();
  const std::string text = slurp(out / "sweep_gamma.tsv");
  int rows = 0;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);)
    if (!line.empty() && line[0] != '#' && line.rfind("method", 0) != 0) ++rows;
  EXPECT_EQ(rows, 5 * 2);  // SARVE and baseline rows
  for (const char* f : {"precision_gamma.tsv", "recall_gamma.tsv", "f_measure_gamma.tsv"})
    EXPECT_TRUE(fs::exists(out / f)) << f;
}

TEST_F(CliTest, EvaluateAndSummarize) {
  const auto ds = gen("e");
  const fs::path a = dir_ / "ea", b = dir_ / "eb";
  ASSERT_EQ(run({"evaluate", "--dataset", ds, "--out", a.string()}), 0) << err_.str();
  ASSERT_EQ(run({"evaluate", "--dataset", ds, "--out", b.string(), "--workers", "3"}), 0);
  EXPECT_EQ(slurp(a / "evaluation.tsv"), slurp(b / "evaluation.tsv"));
  ASSERT_EQ(run({"evaluate", "--dataset", ds, "--out", a.string(), "--truth", "thresholds"}), 0);
  ASSERT_EQ(run({"summarize", "--dataset", ds, "--out", a.string()}), 0);
  EXPECT_NE(slurp(a / "summary.tsv").find("contact_duration"), std::string::npos);
}

TEST_F(CliTest, ZeroPresentersSucceeds) {
  const auto ds = gen("z", {"--presenters", "0", "--contacts-per-presenter", "0"});
  const fs::path out = dir_ / "zo";
  EXPECT_EQ(run({"recommend", "--dataset", ds, "--out", out.string()}), 0) << err_.str();
  EXPECT_TRUE(fs::exists(out / "recommendations.tsv"));
}

}  // namespace
}  // namespace sarve
