#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "orthowg/cli.hpp"
#include "support.hpp"

using orthowg::json;
using testing_support::data_dir;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = orthowg::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, WeingartenEntry) {
  const auto r = run({"wg", "--n", "8", "--lambda", "3,1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["wg"], "2*N^6/((N+1)*(N+2)*(N+6)*(N-1)*(N-2)*(N-3))");
  EXPECT_EQ(j["wg_limit"], "2");
  EXPECT_EQ(j["metadata"]["rng"], orthowg::kRngName);
  EXPECT_FALSE(j["metadata"].contains("workers"));
}

TEST(Cli, WeingartenTables) {
  const auto two = json::parse(run({"wg", "--n", "2"}).out);
  EXPECT_EQ(two["entries"]["1"]["Wg"], "1/N");
  const auto four = json::parse(run({"wg", "--n", "4", "--eval", "10"}).out);
  EXPECT_EQ(four["entries"]["1,1"]["Wg_value"], "11/1080");
  EXPECT_EQ(four["entries"]["2"]["Wg_value"], "-1/1080");
}

TEST(Cli, GoldenTablesRegenerate) {
  for (int n : {2, 4, 6, 8}) {
    const std::string path = data_dir() + "/weingarten_n" + std::to_string(n) + ".json";
    const auto r = run({"wg", "--n", std::to_string(n)});
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out, slurp(path)) << path;
    // The stored coefficients rebuild the stored strings.
    const auto entries = orthowg::parse_weingarten_entries(orthowg::read_json_file(path));
    for (const auto& [lam, f] : entries) EXPECT_EQ(f, orthowg::weingarten_table(n).Wg(lam));
  }
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"wg", "--n", "3"}).code, orthowg::kExitValidation);
  EXPECT_EQ(run({"wg", "--n", "12"}).code, orthowg::kExitCap);
  EXPECT_EQ(run({"frobnicate"}).code, orthowg::kExitValidation);
  EXPECT_EQ(run({"moment", "--expr", "/nonexistent.json"}).code, orthowg::kExitValidation);
  const std::string ex = data_dir() + "/ex_moment.json";
  EXPECT_EQ(run({"moment", "--expr", ex, "--N", "10", "--cap-terms", "100"}).code, orthowg::kExitCap);
  EXPECT_EQ(run({"verify", "--suite", "nope"}).code, orthowg::kExitValidation);
  // 3x3 matrices but the table has a pole at N = 3.
  const std::string small = testing::TempDir() + "/small.json";
  {
    std::ofstream f(small);
    json doc = orthowg::expression_json(orthowg::TraceExpression(
        {{{1, 1, 1}, {1, 1, 2}, {1, 1, 3}, {1, 1, 4}, {1, 1, 1}, {1, 1, 2}, {1, 1, 3}, {1, 1, 4}}}));
    json m = json::object();
    for (int l = 1; l <= 4; ++l) m[std::to_string(l)] = {{"1", "0", "0"}, {"0", "1", "0"}, {"0", "0", "1/2"}};
    doc["matrices"] = m;
    f << doc.dump();
  }
  const auto pole = run({"moment", "--expr", small, "--N", "3"});
  EXPECT_EQ(pole.code, orthowg::kExitPole) << pole.err;
  EXPECT_NE(pole.err.find("pole"), std::string::npos);
}

TEST(Cli, MomentReports) {
  const std::string ex = data_dir() + "/ex_conj.json";
  const auto r = run({"moment", "--expr", ex, "--N", "10"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  const auto doc = orthowg::read_json_file(ex);
  const auto ms = orthowg::parse_matrices(doc["matrices"]);
  EXPECT_EQ(j["value"], orthowg::rational_string(testing_support::ntr(ms.at(1)) * testing_support::ntr(ms.at(2))));

  const auto asym = json::parse(run({"moment", "--expr", data_dir() + "/ex_moment.json", "--asymptotic"}).out);
  EXPECT_TRUE(asym.contains("limit"));
  EXPECT_TRUE(asym["terms"].is_array());
}

TEST(Cli, ExpandListsTerms) {
  const auto r = run({"expand", "--expr", data_dir() + "/ex_twist.json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  ASSERT_EQ(j["term_count"], 1);
  EXPECT_EQ(j["terms"][0]["n_exponent"], -1);
  EXPECT_EQ(j["terms"][0]["traces"], "tr(X1*X2^T)");
}

TEST(Cli, Cumulant) {
  const std::string ex = data_dir() + "/ex_cumulant.json";
  const auto exact = json::parse(run({"cumulant", "--exprs", ex, "--N", "4"}).out);
  const auto sym = json::parse(run({"cumulant", "--exprs", ex, "--symbolic"}).out);
  ASSERT_TRUE(sym.contains("value"));
  const orthowg::PolyFrac f(orthowg::parse_polynomial(sym["value"]["num"]), orthowg::parse_polynomial(sym["value"]["den"]));
  EXPECT_EQ(orthowg::rational_string(f.eval_at(4L)), exact["value"]);
}

TEST(Cli, VerifySuites) {
  const auto nc = run({"verify", "--suite", "noncross"});
  EXPECT_EQ(nc.code, 0);
  EXPECT_TRUE(json::parse(nc.out)["counterexamples"].empty());
  const auto oracle = run({"verify", "--suite", "oracle", "--battery", "20"});
  EXPECT_EQ(oracle.code, 0);
  EXPECT_EQ(json::parse(oracle.out)["agreements"], 20);
  const auto mc = run({"verify", "--suite", "mc", "--expr", data_dir() + "/ex_conj.json", "--N", "10", "--samples",
                       "5000"});
  EXPECT_EQ(mc.code, 0) << mc.out;
  for (const char* k : {"exact", "mc_mean", "mc_se", "z_score"}) EXPECT_TRUE(json::parse(mc.out).contains(k));
}

TEST(Cli, ByteIdenticalAcrossWorkers) {
  const std::string ex = data_dir() + "/ex_moment.json";
  for (const auto& base : std::vector<std::vector<std::string>>{
           {"moment", "--expr", ex, "--N", "10", "--mode", "float"},
           {"verify", "--suite", "mc", "--expr", data_dir() + "/ex_twist.json", "--N", "10", "--samples", "2000"}}) {
    auto one = base, four = base;
    one.insert(one.end(), {"--workers", "1"});
    four.insert(four.end(), {"--workers", "4"});
    const auto a = run(one), b = run(four);
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
  }
}

TEST(Cli, WritesOutputFile) {
  const std::string path = testing::TempDir() + "/wg2.json";
  ASSERT_EQ(run({"wg", "--n", "2", "--out", path}).code, 0);
  EXPECT_EQ(slurp(path), run({"wg", "--n", "2"}).out);
}
