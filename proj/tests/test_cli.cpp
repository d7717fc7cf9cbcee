// Copyright 2026 The dioph Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <gtest/gtest.h>

#include "dioph/cli.hpp"

namespace dioph {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() /
            ("dioph_cli_" + std::to_string(::getpid()) + "_" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  void TearDown() override { fs::remove_all(root_); }

  int run(std::vector<std::string> args) {
    args.insert(args.begin(), "dioph");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    return cli::main(static_cast<int>(argv.size()), argv.data());
  }
  std::string dir(const std::string& name) const { return (root_ / name).string(); }

  fs::path root_;
};

TEST_F(Cli, ConstructWritesStateAndSteps) {
  ASSERT_EQ(run({"construct", "--d", "3", "--beta", "1", "--steps", "15", "--out", dir("a")}), 0);
  Json doc = read_json(dir("a") + "/state.json");
  EXPECT_EQ(doc["schema"], "dioph/state");
  EXPECT_EQ(doc["schema_version"], kSchemaVersion);
  EXPECT_EQ(doc["tool_version"], kToolVersion);
  EXPECT_EQ(doc["config"]["beta"], "1/1");
  EXPECT_EQ(doc["config"]["steps"], 15);
  EXPECT_FALSE(doc["checks"].empty());
  ConstructionState s = state_from_json(doc);
  ASSERT_EQ(s.size(), 18u);
  EXPECT_EQ(s.at(3), (IntVector{4, -4, -1}));
  std::string csv = slurp(dir("a") + "/steps.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 16);
}

TEST_F(Cli, StateRoundTripIsBitExact) {
  ConstructionState s = construct(3, Rational(3, 2), 9);
  std::string first = state_to_json(s).dump();
  ConstructionState back = state_from_json(Json::parse(first));
  EXPECT_EQ(back.vectors(), s.vectors());
  EXPECT_EQ(back.beta(), s.beta());
  EXPECT_EQ(back.diagnostics().size(), s.diagnostics().size());
  for (std::size_t i = 0; i < s.diagnostics().size(); ++i) {
    EXPECT_EQ(back.diagnostics()[i].mu, s.diagnostics()[i].mu);
    EXPECT_EQ(back.diagnostics()[i].nu, s.diagnostics()[i].nu);
  }
  EXPECT_EQ(state_to_json(back).dump(), first);
}

TEST_F(Cli, RunConfigRoundTrip) {
  cli::RunConfig c;
  c.command = "verify";
  c.d = 4;
  c.beta = "3/2";
  c.steps = 11;
  c.enum_budget = 12345;
  c.state = "x.json";
  c.out = "o";
  cli::RunConfig back = cli::RunConfig::from_json(c.to_json());
  EXPECT_EQ(back.to_json(), c.to_json());
  EXPECT_EQ(back.enum_budget, c.enum_budget);
}

TEST_F(Cli, OutputsAreDeterministicAcrossRunsAndWorkerCounts) {
  ASSERT_EQ(run({"construct", "--beta", "1", "--steps", "10", "--out", dir("s")}), 0);
  std::string state = dir("s") + "/state.json";
  ::setenv(kWorkersEnv, "1", 1);
  ASSERT_EQ(run({"diagnose", "--state", state, "--out", dir("one")}), 0);
  ::setenv(kWorkersEnv, "3", 1);
  ASSERT_EQ(run({"diagnose", "--state", state, "--out", dir("three")}), 0);
  ::unsetenv(kWorkersEnv);
  // The output directory is part of the embedded config; compare the rest.
  Json a = read_json(dir("one") + "/diagnostics.json"), b = read_json(dir("three") + "/diagnostics.json");
  a["config"].erase("out");
  b["config"].erase("out");
  EXPECT_EQ(a.dump(), b.dump());
  EXPECT_EQ(slurp(dir("one") + "/decay.csv"), slurp(dir("three") + "/decay.csv"));

  ASSERT_EQ(run({"construct", "--beta", "1", "--steps", "10", "--out", dir("s")}), 0);
  EXPECT_EQ(slurp(state), slurp(dir("s") + "/state.json"));
  ASSERT_EQ(run({"construct", "--beta", "1", "--steps", "10", "--out", dir("s2")}), 0);
  EXPECT_EQ(slurp(dir("s") + "/steps.csv"), slurp(dir("s2") + "/steps.csv"));
}

TEST_F(Cli, DiagnoseReportsExactIdentityEverywhere) {
  ASSERT_EQ(run({"construct", "--beta", "1", "--steps", "10", "--out", dir("s")}), 0);
  ASSERT_EQ(run({"diagnose", "--state", dir("s") + "/state.json", "--out", dir("s")}), 0);
  Json doc = read_json(dir("s") + "/diagnostics.json");
  ASSERT_FALSE(doc["identity"].empty());
  for (const auto& c : doc["identity"]) EXPECT_EQ(c["verdict"], "exact-equality");
  EXPECT_TRUE(doc["passed"].get<bool>());
  EXPECT_TRUE(fs::exists(dir("s") + "/decay.csv"));
}

TEST_F(Cli, VerifyMatchesAndDetectsFaults) {
  ASSERT_EQ(run({"construct", "--beta", "1/4", "--steps", "9", "--out", dir("s")}), 0);
  std::string state = dir("s") + "/state.json";
  ASSERT_EQ(run({"verify", "--state", state, "--out", dir("s")}), 0);
  Json rep = read_json(dir("s") + "/verify.json");
  EXPECT_TRUE(rep["report"]["match"].get<bool>());

  Json doc = read_json(state);
  doc["state"]["vectors"][5][0] = Integer(parse_integer(doc["state"]["vectors"][5][0].get<std::string>()) + 1).get_str();
  write_json(dir("s") + "/bad.json", doc);
  EXPECT_EQ(run({"verify", "--state", dir("s") + "/bad.json", "--out", dir("bad")}), 1);
  Json bad = read_json(dir("bad") + "/verify.json");
  EXPECT_FALSE(bad["report"]["match"].get<bool>());
  EXPECT_FALSE(bad["report"]["mismatch"].is_null());
}

TEST_F(Cli, ErrorsAreMachineReadable) {
  EXPECT_EQ(run({"verify", "--out", dir("e1")}), 2);
  Json e = read_json(dir("e1") + "/error.json");
  EXPECT_EQ(e["error"]["type"], "argument");

  ASSERT_EQ(run({"construct", "--beta", "1/4", "--steps", "9", "--out", dir("s")}), 0);
  EXPECT_EQ(run({"verify", "--state", dir("s") + "/state.json", "--enum-budget", "5", "--out", dir("e2")}), 2);
  EXPECT_EQ(read_json(dir("e2") + "/error.json")["error"]["type"], "budget-exceeded");

  EXPECT_EQ(run({"construct", "--beta", "one", "--out", dir("e3")}), 2);
  EXPECT_EQ(run({"construct", "--d", "2", "--out", dir("e4")}), 2);
  EXPECT_EQ(run({"construct", "--precision-start", "256", "--precision-cap", "64", "--out", dir("e5")}), 2);
  EXPECT_EQ(run({"construct", "--bogus", "1"}), 2);
  EXPECT_EQ(run({}), 2);
  EXPECT_EQ(run({"diagnose", "--state", dir("missing.json"), "--out", dir("e6")}), 2);
}

TEST_F(Cli, ExponentOnNormFormLattice) {
  ASSERT_EQ(run({"exponent", "--d", "3", "--enum-budget", "20000", "--out", dir("x")}), 0);
  Json om = read_json(dir("x") + "/omega.json");
  EXPECT_EQ(om["estimate"]["below_norm_bound"], 0);
  EXPECT_FALSE(om["estimate"]["caveat"].get<std::string>().empty());
  EXPECT_TRUE(fs::exists(dir("x") + "/lattice.json"));
  EXPECT_TRUE(fs::exists(dir("x") + "/records.csv"));
}

TEST_F(Cli, Cf2GoldenRatio) {
  ASSERT_EQ(run({"cf2", "--beta", "0", "--n", "20", "--out", dir("c")}), 0);
  Json doc = read_json(dir("c") + "/cf2.json");
  EXPECT_NEAR(doc["report"]["mu_hat"].get<double>(), 2.0, 1e-9);
  EXPECT_TRUE(doc["passed"].get<bool>());
}

}  // namespace
}  // namespace dioph
