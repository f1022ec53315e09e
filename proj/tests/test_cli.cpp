#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

using namespace kwise;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

Json run_json(const std::vector<std::string>& args) {
  const CliRun r = run(args);
  EXPECT_EQ(r.code, 0) << r.err;
  return Json::parse(r.out);
}

Rational lo_of(const Json& interval) { return parse_rational(interval["lo"].get<std::string>()); }
Rational hi_of(const Json& interval) { return parse_rational(interval["hi"].get<std::string>()); }

}  // namespace

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"constant", "--n", "4", "--p", "4", "--k", "2", "--bogus"}).code, 2);
  EXPECT_EQ(run({"constant", "--p", "4", "--k", "2"}).code, 2);
  EXPECT_EQ(run({"constant", "--n", "4", "--p", "4", "--k", "2", "--full", "--reduced"}).code, 2);
  EXPECT_EQ(run({"constant", "--n", "4", "--p", "4", "--k", "2", "--a", "1,2,3,4"}).code, 2);
  EXPECT_EQ(run({"verify", "--k", "2"}).code, 2);
  EXPECT_EQ(run({"construct", "--construct", "gauss", "--n", "4"}).code, 2);
  EXPECT_EQ(run({"bound", "--kind", "nonsense", "--p", "4"}).code, 2);
  EXPECT_EQ(run({"sample", "--kind", "gauss", "--n", "4"}).code, 2);
  EXPECT_EQ(run({"moment", "--construct", "partition", "--n", "4", "--p", "x/y"}).code, 2);
  EXPECT_EQ(run({"constant", "--n", "4", "--p", "4", "--k", "2", "--format", "xml"}).code, 2);
  const CliRun r = run({"frobnicate"});
  EXPECT_TRUE(r.out.empty());
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, ComputationErrorsExitOne) {
  const CliRun odd = run({"construct", "--construct", "partition", "--n", "5"});
  EXPECT_EQ(odd.code, 1);
  EXPECT_NE(odd.err.find("error"), std::string::npos);
  EXPECT_EQ(run({"construct", "--construct", "partition", "--n", "30"}).code, 1);
  EXPECT_EQ(run({"construct", "--construct", "xor", "--n", "5"}).code, 1);
  EXPECT_EQ(run({"bound", "--kind", "interpolation", "--p", "4", "--n", "4", "--k", "3"}).code, 1);
  EXPECT_EQ(run({"constant", "--n", "4", "--p", "4", "--k", "5"}).code, 1);
}

TEST(Cli, HelpExitsZero) {
  const CliRun r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("constant"), std::string::npos);
}

TEST(Cli, ConstantReduced) {
  const Json j = run_json({"constant", "--n", "4", "--p", "4", "--k", "2", "--reduced"});
  EXPECT_EQ(j["value"].get<std::string>(), "64/1");
  EXPECT_EQ(j["optimizer"]["q"], Json::parse(R"(["1/8","0/1","3/4","0/1","1/8"])"));
  EXPECT_TRUE(j["unique"].get<bool>());
  EXPECT_TRUE(j["certificate_ok"].get<bool>());
  // Ratio (64/16)^{1/4} = sqrt(2).
  EXPECT_LE(pow(lo_of(j["ratio"]), 2), 2);
  EXPECT_GE(pow(hi_of(j["ratio"]), 2), 2);
  // Reduced is the default.
  EXPECT_EQ(run({"constant", "--n", "4", "--p", "4", "--k", "2"}).out,
            run({"constant", "--n", "4", "--p", "4", "--k", "2", "--reduced"}).out);
}

TEST(Cli, ConstantFullWithWeights) {
  const Json j = run_json({"constant", "--n", "4", "--p", "4", "--k", "2", "--full", "--a", "1,1,1,1"});
  EXPECT_EQ(j["value"].get<std::string>(), "64/1");
  EXPECT_TRUE(j["optimizer"].contains("atoms"));
  EXPECT_TRUE(j["certificate_ok"].get<bool>());
}

TEST(Cli, ConstantFractionalExponentIsAnInterval) {
  const Json j = run_json({"constant", "--n", "4", "--p", "5/2", "--k", "2"});
  ASSERT_TRUE(j["value"].is_object());
  EXPECT_LE(lo_of(j["value"]), 8);
  EXPECT_GE(hi_of(j["value"]), 8);
}

TEST(Cli, Verify) {
  const Json j = run_json({"verify", "--construct", "partition", "--n", "8", "--k", "3"});
  EXPECT_GE(j["k_verified"].get<unsigned>(), 3U);
  EXPECT_TRUE(j["witness"].is_null());
  EXPECT_TRUE(j["exchangeable"].get<bool>());
  const Json fail = run_json({"verify", "--construct", "partition", "--n", "8", "--k", "4", "--marginal"});
  EXPECT_EQ(fail["k_verified"].get<unsigned>(), 3U);
  EXPECT_FALSE(fail["witness"].is_null());
  const Json x = run_json({"verify", "--construct", "xor", "--n", "3", "--k", "2"});
  EXPECT_EQ(x["k_verified"].get<unsigned>(), 2U);
}

TEST(Cli, ConstructAndMoment) {
  const Json space = run_json({"construct", "--construct", "partition", "--n", "4"});
  EXPECT_EQ(sample_space_from_json(space), partition_space(4));
  const Json m = run_json({"moment", "--construct", "partition", "--n", "4", "--p", "4"});
  EXPECT_EQ(m["value"].get<std::string>(), "64/1");
  const Json w = run_json({"moment", "--construct", "independent", "--n", "2", "--p", "2", "--a", "1,-1/2"});
  EXPECT_EQ(w["value"].get<std::string>(), "5/4");
  EXPECT_EQ(run({"moment", "--construct", "independent", "--n", "2", "--p", "2", "--a", "1,2,3"}).code, 1);
}

TEST(Cli, Bound) {
  const Json j = run_json({"bound", "--kind", "haagerup", "--p", "4"});
  // C(4) = 3^{1/4} = 1.3160740...
  EXPECT_LE(pow(lo_of(j["value"]), 4), 3);
  EXPECT_GE(pow(hi_of(j["value"]), 4), 3);
  EXPECT_GT(lo_of(j["value"]), make_rational(1316074, 1000000));
  EXPECT_LT(hi_of(j["value"]), make_rational(1316075, 1000000));
  const Json s = run_json({"bound", "--kind", "sharp", "--p", "4", "--n", "16"});
  EXPECT_EQ(lo_of(s["value"]), 2);
  EXPECT_EQ(hi_of(s["value"]), 2);
  const Json i = run_json({"bound", "--kind", "interpolation", "--p", "4", "--n", "4", "--k", "2"});
  EXPECT_LE(pow(lo_of(i["value"]), 4), 4);
  EXPECT_GE(pow(hi_of(i["value"]), 4), 4);
}

TEST(Cli, SpaceFileInput) {
  const auto path = std::filesystem::temp_directory_path() / "kwise_cli_space_test.json";
  {
    std::ofstream f(path);
    f << R"({"n": 2, "atoms": [{"signs": "++", "prob": "1/2"}, {"signs": "−−", "prob": "1/2"}]})";
  }
  const Json j = run_json({"verify", "--space", path.string(), "--k", "1"});
  EXPECT_EQ(j["k_verified"].get<unsigned>(), 1U);
  const Json two = run_json({"verify", "--space", path.string(), "--k", "2"});
  EXPECT_EQ(two["k_verified"].get<unsigned>(), 1U);
  EXPECT_EQ(run_json({"moment", "--space", path.string(), "--p", "2"})["value"].get<std::string>(), "4/1");
  std::filesystem::remove(path);
  EXPECT_NE(run({"verify", "--space", path.string(), "--k", "1"}).code, 0);
}

TEST(Cli, OutputIsByteIdenticalAcrossRuns) {
  const std::vector<std::vector<std::string>> commands = {
      {"constant", "--n", "6", "--p", "6", "--k", "3"},
      {"constant", "--n", "4", "--p", "4", "--k", "2", "--full"},
      {"sample", "--kind", "partition", "--n", "8", "--seed", "42", "--samples", "20"},
      {"sample", "--kind", "xor", "--n", "3", "--seed", "42", "--samples", "5"},
      {"estimate", "--kind", "independent", "--n", "6", "--p", "4", "--seed", "7", "--samples", "5000"},
      {"bound", "--kind", "haagerup", "--p", "7/2"},
      {"table", "--n", "4,6", "--p", "4", "--k", "2,4", "--format", "csv"},
  };
  for (const auto& c : commands) {
    const CliRun a = run(c), b = run(c);
    EXPECT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
  }
}

TEST(Cli, SampleAndEstimate) {
  const Json j = run_json({"sample", "--kind", "partition", "--n", "6", "--seed", "1", "--samples", "50"});
  ASSERT_EQ(j["draws"].size(), 50U);
  for (const Json& d : j["draws"]) {
    const SignVector v = SignVector::parse(d.get<std::string>());
    EXPECT_TRUE(v.weight() == 0 || v.weight() == 3 || v.weight() == 6);
  }
  const Json x = run_json({"sample", "--kind", "xor", "--n", "2", "--seed", "1"});
  ASSERT_EQ(x["draws"].size(), 1U);
  EXPECT_EQ(x["draws"][0].get<std::string>().size(), 4U);
  const Json e =
      run_json({"estimate", "--kind", "partition", "--n", "8", "--p", "4", "--seed", "3", "--samples", "200000"});
  const double mean = std::stod(e["mean"].get<std::string>());
  const double se = std::stod(e["std_error"].get<std::string>());
  EXPECT_LT(std::abs(mean - 512.0), 4 * se);
  EXPECT_EQ(e["samples"].get<std::uint64_t>(), 200000U);
}

TEST(Cli, CsvAndTableFormats) {
  const CliRun csv = run({"constant", "--n", "4", "--p", "4", "--k", "2", "--format", "csv"});
  ASSERT_EQ(csv.code, 0);
  EXPECT_EQ(csv.out.substr(0, csv.out.find('\n')), "n,p,k,value,ratio_lo,ratio_hi,unique,certificate_ok");
  EXPECT_NE(csv.out.find("4,4/1,2,64/1,"), std::string::npos);
  const CliRun table = run({"constant", "--n", "4", "--p", "4", "--k", "2", "--format", "table"});
  ASSERT_EQ(table.code, 0);
  EXPECT_NE(table.out.find("64/1"), std::string::npos);
  EXPECT_NE(table.out.find("certificate_ok"), std::string::npos);
}

TEST(Cli, TableRowsRespectTheBounds) {
  const Json j = run_json({"table", "--n", "2,4,6,8", "--p", "4,6", "--k", "2,3,4"});
  ASSERT_FALSE(j["rows"].empty());
  for (const Json& row : j["rows"]) {
    EXPECT_TRUE(row["ge_independent"].get<bool>()) << row.dump();
    EXPECT_TRUE(row["certificate_ok"].get<bool>()) << row.dump();
    if (!row["le_interpolation"].is_null()) {
      EXPECT_TRUE(row["le_interpolation"].get<bool>()) << row.dump();
    }
    if (!row["sharp"].is_null()) {
      EXPECT_LE(lo_of(row["lp_ratio"]), hi_of(row["sharp"])) << row.dump();
      EXPECT_GE(hi_of(row["lp_ratio"]), lo_of(row["sharp"])) << row.dump();
    }
  }
}
