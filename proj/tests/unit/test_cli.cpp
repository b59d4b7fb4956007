#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "sumdyn/cli.hpp"

using namespace sumdyn;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path dir;
  TempDir() {
    dir = fs::temp_directory_path() / ("sumdyn_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~TempDir() { fs::remove_all(dir); }
  std::string write(const std::string& name, const std::string& text) const {
    auto p = dir / name;
    std::ofstream(p) << text;
    return p.string();
  }
};

nlohmann::json report(const DispatchResult& r) { return nlohmann::json::parse(r.output); }

}  // namespace

TEST(Cli, StrausDensity) {
  RunConfig c;
  c.command = "straus";
  c.primes = {5, 13, 29};
  c.density = true;
  c.window = 1000000;
  auto r = dispatch(c);
  EXPECT_EQ(r.exit_code, kExitOk);
  auto j = report(r);
  EXPECT_EQ(j["density"]["bound"]["exact"], "1023/1885");
  EXPECT_GE(j["density"]["measured"]["value"].get<double>(), 1023.0 / 1885 - 0.02);
  EXPECT_EQ(j["config"]["primes"], nlohmann::json({5, 13, 29}));
  EXPECT_EQ(j["version"], kReportVersion);
}

TEST(Cli, StrausRefutation) {
  RunConfig c;
  c.command = "straus";
  c.primes = {5, 13, 29, 103};
  c.refute = true;
  c.random_B_size = 40;
  c.random_B_count = 2;
  c.K = 110;
  c.t_bound = 10;
  c.seed = 3;
  c.window = 100000;
  auto j = report(dispatch(c));
  ASSERT_EQ(j["refutations"].size(), 2u);
  EXPECT_EQ(j["unresolved"], 0);
  for (const auto& per_B : j["refutations"])
    for (const auto& [t, v] : per_B["t"].items()) EXPECT_FALSE(v["member"].get<bool>()) << t;
}

TEST(Cli, VerifyParityViolationExitsTwo) {
  TempDir tmp;
  RunConfig c;
  c.command = "verify";
  c.set_path = tmp.write("odds.json", R"({"type":"residue","m":2,"r":1})");
  c.cert_path = tmp.write("c.json", R"({"kind":"ThmA","ell":0,"B":[1,3],"t":[0,0],"K":2,"window":1000})");
  c.window = 1000;
  auto r = dispatch(c);
  EXPECT_EQ(r.exit_code, kExitVerification);
  auto j = report(r);
  EXPECT_EQ(j["status"], "violation");
  EXPECT_EQ(j["result"]["checks"][0]["violation"]["k"], 2);
  EXPECT_EQ(j["result"]["checks"][0]["violation"]["sum"], 4);
}

TEST(Cli, VerifyEmptyBIsVacuous) {
  TempDir tmp;
  RunConfig c;
  c.command = "verify";
  c.set_path = tmp.write("odds.json", R"({"type":"residue","m":2,"r":1})");
  c.cert_path = tmp.write("c.json", R"({"kind":"ThmB","B":[],"t":[0],"s":[0],"K":1,"window":100})");
  auto r = dispatch(c);
  EXPECT_EQ(r.exit_code, kExitOk);
  EXPECT_EQ(report(r)["status"], "vacuous");
}

TEST(Cli, SearchRoundTripThroughVerify) {
  TempDir tmp;
  RunConfig c;
  c.command = "search";
  c.sub = "mixed";
  c.set_path = tmp.write("evens.json", R"({"type":"residue","m":2,"r":0})");
  c.window = 10000;
  c.K = 3;
  auto r = dispatch(c);
  ASSERT_EQ(r.exit_code, kExitOk);
  auto cert = report(r)["certificate"];
  RunConfig v;
  v.command = "verify";
  v.set_path = c.set_path;
  v.cert_path = tmp.write("cert.json", cert.dump());
  auto rv = dispatch(v);
  EXPECT_EQ(rv.exit_code, kExitOk);
  EXPECT_EQ(report(rv)["status"], "pass");
}

TEST(Cli, SearchFailureExitsTwoWithTrace) {
  TempDir tmp;
  RunConfig c;
  c.command = "search";
  c.sub = "thma";
  c.set_path = tmp.write("odds.json", R"({"type":"residue","m":2,"r":1})");
  c.window = 1000;
  c.K = 2;
  c.budget.force_zero_shifts = true;
  auto r = dispatch(c);
  EXPECT_EQ(r.exit_code, kExitVerification);
  auto j = report(r);
  EXPECT_EQ(j["trace"]["level"], 2);
  EXPECT_EQ(j["trace"]["obstruction"]["modulus"], 2);
}

TEST(Cli, MalformedSpecNamesPosition) {
  TempDir tmp;
  RunConfig c;
  c.command = "density";
  c.set_path = tmp.write("bad.json", "{\"type\": \"residue\",\n \"m\": 2,, }");
  try {
    dispatch(c);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    std::string msg = e.what();
    EXPECT_NE(msg.find("bad.json"), std::string::npos);
    EXPECT_NE(msg.find("line 2"), std::string::npos);
  }
}

TEST(Cli, ReproducibleReports) {
  RunConfig c;
  c.command = "repro";
  c.sub = "appendix-a2";
  c.N = 4000;
  c.M = 16;
  c.threads = 1;
  auto a = dispatch(c);
  c.threads = 3;
  auto b = dispatch(c);
  // The thread count is part of the embedded config; everything else must match.
  auto ja = report(a), jb = report(b);
  ja["config"].erase("threads");
  jb["config"].erase("threads");
  EXPECT_EQ(ja.dump(), jb.dump());
  c.threads = 1;
  EXPECT_EQ(dispatch(c).output, a.output);
  EXPECT_EQ(ja["result"]["conditional_expectations"]["discrepancy"]["exact"], "-1/729");
}

TEST(Cli, NilOrbitCsv) {
  RunConfig c;
  c.command = "nil";
  c.sub = "orbit";
  c.s = 3;
  c.alpha = "1/7";
  c.mode = "exact";
  c.n = 2;
  EXPECT_EQ(dispatch(c).output, "n,x1,x2,x3\n0,0,0,0\n1,1/7,1/7,1/7\n2,2/7,4/7,1/7\n");
}

TEST(Cli, NilOmegaIsJsonArray) {
  RunConfig c;
  c.command = "nil";
  c.sub = "omega";
  c.s = 3;
  c.k = 2;
  c.samples = 5;
  c.seed = 7;
  auto j = report(dispatch(c));
  ASSERT_TRUE(j.is_array());
  EXPECT_EQ(j.size(), 5u);
  EXPECT_EQ(j[0].size(), 12u);
}

TEST(Cli, WindowFromEnvironment) {
  ::setenv("SUMDYN_WINDOW", "1234", 1);
  RunConfig c;
  EXPECT_EQ(c.effective_window(), 1234u);
  ::unsetenv("SUMDYN_WINDOW");
  EXPECT_EQ(c.effective_window(), 1000000u);
}

TEST(Cli, UnknownCommandThrows) {
  RunConfig c;
  c.command = "frobnicate";
  EXPECT_THROW(dispatch(c), InvalidInput);
  c.command = "nil";
  c.sub = "orbit";
  c.mode = "symbolic";
  EXPECT_THROW(dispatch(c), InvalidInput);
}
