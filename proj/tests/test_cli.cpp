#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "bumpforest");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = bumpforest::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

using bumpforest::cli::kOk;
using bumpforest::cli::kUnreliable;
using bumpforest::cli::kUsageError;

TEST(Cli, ForestFive) {
  const auto r = run({"forest", "--n", "5"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto l = lines(r.out);
  EXPECT_EQ(l[1], "5,120,24,55,15,1,23451,12345");
}

TEST(Cli, ForestOneJson) {
  const auto r = run({"forest", "--n", "1", "--format", "json"});
  ASSERT_EQ(r.code, kOk);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["tree_count"], 1);
  EXPECT_EQ(j["vertices"], 1);
}

TEST(Cli, ForestRejectsLargeN) {
  EXPECT_EQ(run({"forest", "--n", "10"}).code, kUsageError);
  EXPECT_EQ(run({"forest", "--n", "0"}).code, kUsageError);
}

TEST(Cli, DescFigureOne) {
  const auto r = run({"desc", "--perm", "31245", "--format", "json"});
  ASSERT_EQ(r.code, kOk);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["root"], "31245");
  EXPECT_EQ(j["nodes"].size(), 5u);
  const auto text = run({"desc", "--perm", "31245", "--format", "text"});
  EXPECT_EQ(text.out, "31245\n  43125\n    54312\n      35412\n  53124\n");
}

TEST(Cli, DescSingleAndCsv) {
  const auto r = run({"desc", "--perm", "23451"});
  EXPECT_EQ(lines(r.out).size(), 2u);
  EXPECT_EQ(run({"desc", "--perm", "31254"}).code, kOk);
  EXPECT_EQ(run({"desc", "--perm", "3125"}).code, kUsageError);
}

TEST(Cli, EstimateDeterministic) {
  const std::vector<std::string> args{"estimate", "--alpha", "0.5", "--trials", "20000", "--seed", "42",
                                      "--stats", "size,leaves"};
  const auto a = run(args);
  const auto b = run(args);
  ASSERT_EQ(a.code, kOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  const auto l = lines(a.out);
  ASSERT_EQ(l.size(), 3u);
  EXPECT_EQ(l[0], "alpha,statistic,estimate,se,analytic,trials,truncation_rate,seed");
  EXPECT_EQ(l[1].rfind("0.5,size,", 0), 0u);
  EXPECT_EQ(l[2].rfind("0.5,leaves,", 0), 0u);
}

TEST(Cli, EstimateAlphaGridRepeatableAndComma) {
  const auto a = run({"estimate", "--alpha", "0.1,0.2", "--trials", "100", "--stats", "size"});
  const auto b = run({"estimate", "--alpha", "0.1", "--alpha", "0.2", "--trials", "100", "--stats", "size"});
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(lines(a.out).size(), 3u);
}

TEST(Cli, EstimateDivergentAnalytic) {
  const auto r = run({"estimate", "--alpha", "1.0", "--trials", "50", "--stats", "size", "--max-nodes", "20000"});
  EXPECT_NE(r.out.find("divergent"), std::string::npos);
}

TEST(Cli, EstimateUnreliableExit) {
  const auto r = run({"estimate", "--alpha", "0.9", "--trials", "500", "--max-nodes", "3", "--stats", "size"});
  EXPECT_EQ(r.code, kUnreliable);
}

TEST(Cli, EstimateJsonRecordsWorkers) {
  const auto r = run({"estimate", "--alpha", "0.3", "--trials", "100", "--workers", "2", "--format", "json",
                      "--stats", "gw_size"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["workers"], 2);
  EXPECT_EQ(j["reports"][0]["model"], "galton-watson");
}

TEST(Cli, EstimateRejectsBadInput) {
  EXPECT_EQ(run({"estimate", "--alpha", "1.5"}).code, kUsageError);
  EXPECT_EQ(run({"estimate", "--stats", "bogus", "--trials", "10"}).code, kUsageError);
  EXPECT_EQ(run({"estimate", "--alpha", "1.0", "--stats", "gw_size", "--trials", "10"}).code, kUsageError);
}

TEST(Cli, SeedFromEnvironment) {
  const std::vector<std::string> args{"estimate", "--alpha", "0.5", "--trials", "2000", "--stats", "size"};
  setenv("BUMPFOREST_SEED", "77", 1);
  const auto env = run(args);
  unsetenv("BUMPFOREST_SEED");
  auto explicit_args = args;
  explicit_args.insert(explicit_args.end(), {"--seed", "77"});
  EXPECT_EQ(env.out, run(explicit_args).out);
  EXPECT_NE(env.out.find(",77\n"), std::string::npos);
}

TEST(Cli, VerifySuites) {
  EXPECT_EQ(run({"verify", "--suite", "word-identities", "--n-max", "6", "--r-max", "3"}).code, kOk);
  EXPECT_EQ(run({"verify", "--suite", "completeness", "--len-max", "5"}).code, kOk);
  EXPECT_EQ(run({"verify", "--suite", "forest-facts", "--n-max", "7"}).code, kOk);
  EXPECT_EQ(run({"verify", "--suite", "nope"}).code, kUsageError);
}

TEST(Cli, TreeOfWord) {
  const auto r = run({"tree", "--word", "2 1 0 1 0"});
  EXPECT_EQ(lines(r.out)[1], "19,7,5,false");
  const auto j = nlohmann::json::parse(run({"tree", "--word", "0 0", "--format", "json", "--full"}).out);
  EXPECT_EQ(j["nodes"].size(), 4u);
}

TEST(Cli, DepthTable) {
  const auto r = run({"depth", "--alpha", "0.5", "--r", "3", "--n-max", "6"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(lines(r.out).size(), 5u);
}

TEST(Cli, LocalLimitAndTailAndProbe) {
  EXPECT_EQ(run({"local-limit", "--n", "100", "--r", "1", "--trials", "200"}).code, kOk);
  EXPECT_EQ(run({"tail", "--alpha", "0.3", "--trials", "2000"}).code, kOk);
  const auto p = run({"probe", "--alpha", "1", "--bounds", "2", "--trials", "5000"});
  EXPECT_EQ(p.code, kOk);
  EXPECT_EQ(lines(p.out).size(), 2u);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, kUsageError);
  EXPECT_EQ(run({"forest", "--n", "3", "--bogus"}).code, kUsageError);
  EXPECT_EQ(run({"nonsense"}).code, kUsageError);
}

TEST(Cli, HelpShowsDefaults) {
  const auto r = run({"estimate", "--help"});
  EXPECT_EQ(r.code, kOk);
  EXPECT_NE(r.out.find("--trials"), std::string::npos);
  EXPECT_NE(r.out.find("[100000]"), std::string::npos);
  EXPECT_NE(r.out.find("--max-depth"), std::string::npos);
  EXPECT_NE(r.out.find("[1000]"), std::string::npos);
}

TEST(Cli, WritesOutFile) {
  const auto path = std::filesystem::temp_directory_path() / "bumpforest_cli_test.csv";
  const auto r = run({"forest", "--n", "3", "--out", path.string()});
  ASSERT_EQ(r.code, kOk);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header.rfind("n,vertices", 0), 0u);
  std::filesystem::remove(path);
}
