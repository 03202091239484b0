#include <gtest/gtest.h>

#include <sstream>

#include "extremal/experiment.hpp"
#include "extremal/numeric.hpp"

using namespace extremal;
using nlohmann::json;

namespace {

RunResult run(const std::string& command, json params, json extra = json::object()) {
  json cfg = {{"command", command}, {"params", std::move(params)}};
  for (auto it = extra.begin(); it != extra.end(); ++it) cfg[it.key()] = it.value();
  return run_experiment(cfg);
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST(Config, DefaultsAndValidation) {
  json c = normalize_config({{"command", "flow"}});
  EXPECT_EQ(c["seed"], 1);
  EXPECT_TRUE(c.contains("precision"));
  EXPECT_THROW(normalize_config({{"command", "flow"}, {"bogus", 1}}), Error);
  EXPECT_THROW(normalize_config({{"params", json::object()}}), Error);
  EXPECT_THROW(normalize_config({{"command", "flow"}, {"workers", 0}}), Error);
  EXPECT_THROW(normalize_config({{"command", "flow"}, {"precision", 64}}), Error);
}

TEST(Config, UnknownCommandsAndParamsAreRejected) {
  EXPECT_THROW(run("nope", json::object()), Error);
  EXPECT_THROW(run("flow", {{"tmax", 3}}), Error);
  EXPECT_THROW(run("flow", {{"t_max", "abc"}}), Error);
  EXPECT_THROW(run("exponent", {{"kind", "golden"}, {"A", "1/2"}}), Error);  // exactly one source
}

TEST(Config, EchoIsTheFirstCsvLine) {
  auto r = run("flow", {{"y", "golden"}, {"t_max", 4}}, {{"seed", 7}});
  EXPECT_EQ(r.exit_code, kExitOk);
  EXPECT_EQ(r.format, "csv");
  auto ls = lines(r.data);
  ASSERT_GE(ls.size(), 3u);
  ASSERT_EQ(ls[0].rfind("# config: ", 0), 0u);
  json echo = json::parse(ls[0].substr(10));
  EXPECT_EQ(echo["seed"], 7);
  EXPECT_EQ(echo["command"], "flow");
  EXPECT_FALSE(echo.contains("workers"));
}

TEST(Determinism, OutputIsByteIdenticalAcrossWorkerCounts) {
  json params = {{"b", "sqrt2"}, {"Qs", "8,16"}, {"samples", 2000}};
  auto one = run("measure48", params, {{"workers", 1}, {"seed", 3}});
  auto three = run("measure48", params, {{"workers", 3}, {"seed", 3}});
  EXPECT_EQ(one.data, three.data);
  auto again = run("measure48", params, {{"workers", 1}, {"seed", 3}});
  EXPECT_EQ(one.data, again.data);
  auto other = run("measure48", params, {{"workers", 1}, {"seed", 4}});
  EXPECT_NE(one.data, other.data);
}

TEST(Truncation, TooFewDigitsAreRefused) {
  EXPECT_THROW(run("exponent", {{"kind", "golden"}, {"digits", 5}, {"Q", "10000"}}), Error);
  auto ok = run("exponent", {{"kind", "golden"}, {"digits", 40}, {"Q", "100,1000"}});
  EXPECT_EQ(ok.exit_code, kExitOk);
  EXPECT_NE(ok.data.find("# omega_hat: "), std::string::npos);
}

TEST(ExitCodes, CriterionViolationIsTwo) {
  auto bad = run("criterion", {{"n", 2}, {"s", 1}, {"j", 1}, {"bound", 2}, {"A", "0;0"}, {"v", "3"}});
  EXPECT_EQ(bad.exit_code, kExitViolation);
  json j = json::parse(bad.data);
  EXPECT_EQ(j["result"]["verdict"], "violated");
  auto good = run("criterion", {{"n", 2}, {"s", 1}, {"j", 2}, {"bound", 2}, {"A", "7/11;-13/17"}, {"v", "40"}, {"N", "1000"}});
  EXPECT_EQ(good.exit_code, kExitOk);
}

TEST(ExitCodes, StrongSeparation) {
  auto r = run("strong", {{"a", "liouville:10:5,0,0"}, {"Q", 200}});
  EXPECT_EQ(r.exit_code, kExitViolation);
  json j = json::parse(r.data);
  EXPECT_FALSE(j["result"]["verdict"]["strongly_extremal_evidence"].get<bool>());
}

TEST(Commands, FormatsAndHelp) {
  auto r = run("flow", {{"y", "3/7"}, {"t_max", 3}}, {{"format", "json"}});
  EXPECT_EQ(r.format, "json");
  EXPECT_NO_THROW(json::parse(r.data));
  EXPECT_THROW(run("flow", {{"t_max", 3}}, {{"format", "xml"}}), Error);
  EXPECT_NE(command_help("measure48").find("samples"), std::string::npos);
  EXPECT_EQ(command_help("nope"), "");
}

TEST(Commands, GoodnessDemonstrationCsv) {
  auto r = run("goodness", {{"f", "monomial:2"}, {"x0", "0"}, {"alphas", "1/2"}, {"eps", "log:6"}});
  EXPECT_EQ(r.exit_code, kExitOk);
  auto ls = lines(r.data);
  bool header = false;
  for (const auto& l : ls) header = header || l == "alpha,radius,log_C_hat,C_hat";
  EXPECT_TRUE(header);
}

TEST(Commands, LemmasReducedPass) {
  auto r = run("lemmas", {{"which", "rankn"}, {"reduced", true}, {"ns", "2"}});
  EXPECT_EQ(r.exit_code, kExitOk);
}

TEST(Commands, SelftestMutationFails) {
  auto r = run("selftest", {{"reduced", true}, {"mutate", "shuffle-sign"}});
  EXPECT_EQ(r.exit_code, kExitError);
  EXPECT_NE(r.data.find("FAIL"), std::string::npos);
}
