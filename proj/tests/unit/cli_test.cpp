#include "tempcorr/cli.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

namespace tempcorr::cli {
namespace {

namespace fs = std::filesystem;
using std::numbers::pi;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "tempcorr");
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::vector<double>> parse_csv(const std::string& text, std::string* header) {
  std::istringstream in(text);
  std::getline(in, *header);
  std::vector<std::vector<double>> rows;
  for (std::string line; std::getline(in, line);) {
    std::vector<double> row;
    std::istringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("tempcorr_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, Fig2WritesOneRowPerPoint) {
  const Outcome o = invoke({"fig2", "--points", "200", "-o", path("fig2.csv")});
  ASSERT_EQ(o.code, 0) << o.err;
  std::string header;
  const auto rows = parse_csv(slurp(path("fig2.csv")), &header);
  EXPECT_EQ(header, kFig2Header);
  ASSERT_EQ(rows.size(), 200u);
  double nearest = 10.0;
  double s_nearest = 0.0;
  for (const auto& r : rows) {
    ASSERT_EQ(r.size(), 6u);
    EXPECT_GT(std::max(r[1], r[2]), 2.0);
    EXPECT_GT(r[5], 0.0);
    if (std::abs(r[0] - pi / 4) < nearest) {
      nearest = std::abs(r[0] - pi / 4);
      s_nearest = r[1];
    }
  }
  EXPECT_NEAR(s_nearest, 2.828427, 1e-3);
}

TEST_F(CliTest, RejectsSingleGridPoint) {
  const Outcome o = invoke({"fig2", "--points", "1"});
  EXPECT_EQ(o.code, kExitConfig);
  EXPECT_NE(o.err.find("grid_points must be ≥ 2"), std::string::npos) << o.err;
}

TEST_F(CliTest, RejectsBadConfig) {
  EXPECT_EQ(invoke({"fig3", "--gamma-min", "2", "--gamma-max", "1"}).code, kExitConfig);
  EXPECT_EQ(invoke({"hierarchy", "--eta", "1.5"}).code, kExitConfig);
  EXPECT_EQ(invoke({"fig2", "--format", "xml"}).code, kExitConfig);
  EXPECT_EQ(invoke({"verify", "--suite", "nope"}).code, kExitConfig);
  EXPECT_EQ(invoke({}).code, kExitConfig);
}

TEST_F(CliTest, WriteFailureIsIoError) {
  const Outcome o = invoke({"fig2", "--points", "3", "-o", path("missing/dir/fig2.csv")});
  EXPECT_EQ(o.code, kExitIo);
}

TEST_F(CliTest, Fig2IsDeterministicAcrossThreadCounts) {
  ::setenv("TEMPCORR_THREADS", "1", 1);
  ASSERT_EQ(invoke({"fig2", "--points", "64", "-o", path("a.csv")}).code, 0);
  ::setenv("TEMPCORR_THREADS", "3", 1);
  ASSERT_EQ(invoke({"fig2", "--points", "64", "-o", path("b.csv")}).code, 0);
  ::unsetenv("TEMPCORR_THREADS");
  const std::string a = slurp(path("a.csv"));
  EXPECT_EQ(a, slurp(path("b.csv")));
  EXPECT_EQ(a.find('\r'), std::string::npos);
}

TEST_F(CliTest, Fig2Json) {
  const Outcome o = invoke({"fig2", "--points", "4", "--format", "json"});
  ASSERT_EQ(o.code, 0);
  EXPECT_NE(o.out.find("\"S_analytic\""), std::string::npos);
  EXPECT_EQ(o.out.front(), '[');
}

TEST_F(CliTest, Fig3RowsAndSidecar) {
  const Outcome o =
      invoke({"fig3", "--points", "11", "--gamma-min", "0", "--gamma-max", "5", "-o", path("fig3.csv")});
  ASSERT_EQ(o.code, 0) << o.err;
  std::string header;
  const auto rows = parse_csv(slurp(path("fig3.csv")), &header);
  EXPECT_EQ(header, kFig3Header);
  ASSERT_EQ(rows.size(), 11u);
  EXPECT_EQ(rows.front()[0], 0.0);
  EXPECT_NEAR(rows.front()[1], 2.0 * std::numbers::sqrt2 - 2.0, 1e-12);
  EXPECT_NEAR(rows.front()[2], 0.0, 1e-12);
  EXPECT_EQ(rows.back()[0], 5.0);
  for (std::size_t c = 1; c <= 4; ++c) EXPECT_LT(rows.back()[c], 0.0);

  const std::string side = slurp(path("fig3.crossings.json"));
  EXPECT_NE(side.find("\"k4_crossing_paper\": 0.24478664"), std::string::npos) << side;
  EXPECT_NE(side.find("\"s2_crossing_paper\": null"), std::string::npos);
  EXPECT_NE(side.find("\"s2_paper_violated_at_zero_damping\": false"), std::string::npos);
}

TEST(SidecarPath, ReplacesExtension) {
  EXPECT_EQ(sidecar_path("out/fig3.csv"), "out/fig3.crossings.json");
  EXPECT_EQ(sidecar_path("fig3"), "fig3.crossings.json");
  EXPECT_EQ(sidecar_path("a.b/fig3"), "a.b/fig3.crossings.json");
}

TEST_F(CliTest, ThresholdsJson) {
  const Outcome o = invoke({"thresholds", "-o", path("t.json")});
  ASSERT_EQ(o.code, 0) << o.err;
  const std::string text = slurp(path("t.json"));
  for (const char* name : {"steering_triple", "lgi_n4", "lgi_n5", "lgi_n6", "lgi_n7", "lgi_n8"})
    EXPECT_NE(text.find(name), std::string::npos) << name;
  EXPECT_EQ(text.find("\"passes\": false"), std::string::npos);
}

TEST_F(CliTest, HierarchySingleEta) {
  const Outcome o = invoke({"hierarchy", "--eta", "0.7"});
  ASSERT_EQ(o.code, 0);
  std::string header;
  const auto rows = parse_csv(o.out, &header);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_NEAR(rows[0][1], 1.47, 1e-12);
  EXPECT_EQ(rows[0][7], 1.0);
}

TEST_F(CliTest, VerifyThresholdSuitePasses) {
  const Outcome o = invoke({"verify", "--suite", "thresholds"});
  EXPECT_EQ(o.code, 0) << o.err;
  EXPECT_NE(o.out.find("suite thresholds: PASS"), std::string::npos);
}

TEST_F(CliTest, CorruptedToleranceTripsVerifyGate) {
  const Outcome o = invoke({"verify", "--suite", "thresholds", "--tolerance-scale", "0"});
  EXPECT_EQ(o.code, kExitVerifyGate);
  EXPECT_NE(o.err.find("\"quantity\":\"steering_triple\""), std::string::npos) << o.err;
}

TEST_F(CliTest, Theorem2Table) {
  const Outcome o = invoke({"verify", "--suite", "theorem2", "--points", "40", "-o", path("t2.csv")});
  ASSERT_EQ(o.code, 0) << o.err;
  std::istringstream in(slurp(path("t2.csv")));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line.rfind("x,best_ordering,", 0), 0u);
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 40);
}

TEST(Executable, ExitCodesPropagate) {
  const int status = std::system(TEMPCORR_EXE " fig2 --points 1 2>/dev/null");
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), kExitConfig);
  const int ok = std::system(TEMPCORR_EXE " fig2 --points 2 >/dev/null");
  ASSERT_TRUE(WIFEXITED(ok));
  EXPECT_EQ(WEXITSTATUS(ok), 0);
}

}  // namespace
}  // namespace tempcorr::cli
