#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "nestderiv/cli.hpp"

using namespace nestderiv;

namespace {

struct Result {
  int status;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "nestderiv");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int status = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  set_precision_bits(kDefaultPrecisionBits);
  return {status, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << content;
  return path;
}

}  // namespace

TEST(Cli, ExactArctanRational) {
  auto r = run({"exact", "--fn", "arctan", "--x0", "0", "--nmax", "3", "--rational"});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.out, "n,g,D\n0,1,1\n1,0,0\n2,2,2\n3,0,0\n");
}

TEST(Cli, ExactFloatMode) {
  auto r = run({"exact", "--fn", "hermite_like", "--x0", "1", "--nmax", "2", "--format", "json"});
  ASSERT_EQ(r.status, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j.size(), 3u);
  EXPECT_EQ(j[1]["g"], 1.0);
  // g2 = omega' + 2 omega^2 = 3 at x0 = 1.
  EXPECT_DOUBLE_EQ(j[2]["g"].get<double>(), 3.0);
}

TEST(Cli, RaysArctan) {
  auto r = run({"rays", "--fn", "arctan", "--x", "10", "--n", "5"});
  ASSERT_EQ(r.status, 0) << r.err;
  auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1].rfind("s-,-1.0876", 0), 0u) << rows[1];
  EXPECT_EQ(rows[2].rfind("s+,3.5113", 0), 0u) << rows[2];
}

TEST(Cli, CompareLog1p) {
  auto r = run({"compare", "--fn", "log1p", "--x", "1", "--nmax", "20", "--format", "json"});
  ASSERT_EQ(r.status, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j.size(), 20u);
  for (const auto& row : j) EXPECT_LE(row["rel_err"].get<double>(), 1e-12) << row["n"];
}

TEST(Cli, CompareIsDeterministic) {
  std::vector<std::string> args{"compare", "--fn", "arctan", "--x", "2", "--nmax", "6"};
  EXPECT_EQ(run(args).out, run(args).out);
}

TEST(Cli, InvertArctan) {
  auto r = run({"invert", "--fn", "arctan", "--x0", "0", "--order", "5"});
  ASSERT_EQ(r.status, 0) << r.err;
  auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[3], "3,1/3,1/3,0.0000000000000000000e+00,2");
  EXPECT_EQ(rows[5], "5,2/15,2/15,0.0000000000000000000e+00,16");
}

TEST(Cli, AsymKappaChoice) {
  auto closed = run({"asym", "--fn", "arctan", "--x", "0", "--n", "10", "--kappa", "closed", "--format", "json"});
  auto limit = run({"asym", "--fn", "arctan", "--x", "0", "--n", "10", "--kappa", "limit", "--format", "json"});
  ASSERT_EQ(closed.status, 0) << closed.err;
  ASSERT_EQ(limit.status, 0) << limit.err;
  auto jc = nlohmann::json::parse(closed.out), jl = nlohmann::json::parse(limit.out);
  EXPECT_EQ(jc[0]["kappa_method"], "closed");
  EXPECT_NEAR(jl[0]["kappa"]["value"].get<double>(), 0.959502, 1e-6);
  EXPECT_NE(jc[0]["kappa"]["value"], jl[0]["kappa"]["value"]);
}

TEST(Cli, BernoulliChecks) {
  auto r = run({"bernoulli", "--upto", "20", "--check-identity", "--check-asymptotic"});
  ASSERT_EQ(r.status, 0) << r.err;
  auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 22u);
  EXPECT_EQ(rows[0], "index,exact,refined,leading,ratio_refined,ratio_leading,asymptotic_ok,nested_lhs,identity_rhs,"
                     "identity_ok");
  EXPECT_EQ(rows[13].rfind("12,-691/2730,", 0), 0u);
  EXPECT_EQ(rows[21].substr(rows[21].size() - 4), "true");
}

TEST(Cli, BernoulliPlain) {
  auto r = run({"bernoulli", "--upto", "4"});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.out, "index,exact\n0,1\n1,-1/2\n2,1/6\n3,0\n4,-1/30\n");
}

TEST(Cli, XlargeCheck) {
  auto r = run({"xlarge-check", "--fn", "hermite_like", "--n", "2,5", "--format", "json"});
  ASSERT_EQ(r.status, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j.size(), 6u);
  for (const auto& row : j) EXPECT_NEAR(row["ratio"].get<double>(), 1.0, 0.02);
}

TEST(Cli, OmegaFile) {
  auto path = temp_file("nestderiv_omega.json", R"({"center": "0", "coeffs": ["2", "0", "0", "0"], "mode": "rational"})");
  auto r = run({"exact", "--omega-file", path.string(), "--nmax", "3"});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.out, "n,g,D\n0,1,1\n1,2,2\n2,8,8\n3,48,48\n");
  auto inv = run({"invert", "--omega-file", path.string(), "--order", "3"});
  EXPECT_EQ(inv.status, 0) << inv.err;
}

TEST(Cli, PrecisionFromEnvironmentAndFlag) {
  ::setenv("NESTDERIV_PRECISION_BITS", "128", 1);
  auto env = run({"exact", "--fn", "hermite_like", "--x0", "1", "--nmax", "1", "--precision-dump"});
  ::unsetenv("NESTDERIV_PRECISION_BITS");
  auto flag = run({"exact", "--fn", "hermite_like", "--x0", "1", "--nmax", "1", "--precision-dump",
                   "--precision-bits", "512"});
  ASSERT_EQ(env.status, 0) << env.err;
  ASSERT_EQ(flag.status, 0) << flag.err;
  EXPECT_LT(lines(env.out)[2].size(), lines(flag.out)[2].size());
  EXPECT_EQ(run({"exact", "--fn", "log1p", "--x0", "0", "--precision-bits", "32"}).status, 2);
}

TEST(Cli, UsageErrors) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {},
           {"frobnicate"},
           {"exact", "--fn", "nope", "--x0", "0"},
           {"exact", "--x0", "0"},
           {"exact", "--fn", "log1p"},
           {"exact", "--fn", "log1p", "--omega-file", "x.json", "--x0", "0"},
           {"rays", "--fn", "arctan", "--x", "1"},
           {"rays", "--fn", "steep_decay", "--x", "1", "--n", "2"},
           {"asym", "--fn", "arctan", "--x", "0", "--n", "4", "--kappa", "guess"},
           {"compare", "--fn", "log1p", "--x", "1", "--format", "xml"},
           {"exact", "--omega-file", "/nonexistent/omega.json"},
           {"rays", "--fn", "arctan", "--x", "1", "--n", "3", "--window-lo", "0"},
       }) {
    auto r = run(args);
    EXPECT_EQ(r.status, 2) << (args.empty() ? "" : args[0]) << " " << r.err;
    auto err = nlohmann::json::parse(r.err);
    EXPECT_EQ(err["error"], "usage");
  }
}

TEST(Cli, UnwritableOutput) {
  auto r = run({"compare", "--fn", "log1p", "--x", "1", "--nmax", "2", "--out", "/nonexistent-dir/t.csv"});
  EXPECT_EQ(r.status, 2);
}

TEST(Cli, WritesFile) {
  auto path = std::filesystem::temp_directory_path() / "nestderiv_cli_out.csv";
  std::filesystem::remove(path);
  auto r = run({"compare", "--fn", "log1p", "--x", "1", "--nmax", "2", "--out", path.string()});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "n,exact,asym,rel_err,roots,F,G,J");
}

TEST(Cli, MathErrors) {
  auto caustic = run({"asym", "--fn", "power_law(1/2)", "--x", "1", "--n", "3", "--kappa", "match"});
  EXPECT_EQ(caustic.status, 1);
  EXPECT_EQ(nlohmann::json::parse(caustic.err)["error"], "math");
  auto none = run({"rays", "--fn", "arctan", "--x", "10", "--n", "5", "--window-lo", "0", "--window-hi", "1"});
  EXPECT_EQ(none.status, 1);
  EXPECT_EQ(nlohmann::json::parse(none.err)["message"], "no rays found (widen window)");
  auto domain = run({"exact", "--fn", "log1p", "--x0", "-3"});
  EXPECT_EQ(domain.status, 1);
  EXPECT_EQ(nlohmann::json::parse(domain.err)["error"], "domain");
}

TEST(Cli, Help) {
  auto r = run({"--help"});
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("compare"), std::string::npos);
}
