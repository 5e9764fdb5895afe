// Copyright 2026 The monopriv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Runs the monopriv binary and checks the exit-code contract.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace {

using ::testing::HasSubstr;

namespace fs = std::filesystem;

struct Invocation {
  int code = -1;
  std::string out;
};

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::path(testing::TempDir()) /
           testing::UnitTest::GetInstance()->current_test_info()->name();
    fs::create_directories(dir_);
  }

  fs::path Write(const std::string& name, const std::string& text) {
    std::ofstream(dir_ / name) << text;
    return dir_ / name;
  }

  Invocation Cli(const std::string& args) {
    const fs::path out = dir_ / "stdout.txt";
    const std::string cmd = std::string(MONOPRIV_BIN) + " " + args + " > " +
                            out.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    Invocation r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = Slurp(out);
    return r;
  }

  fs::path dir_;
};

constexpr char kAlg1Mon[] = R"({
  "mechanism": "alg1",
  "params": {"alg1": {"budget": 4, "epsilon": 0.5, "n": 2}},
  "loss_model": "dp_bounded_monotonic",
  "profiles": [
    {"bits": [0, 0], "valuations": [0, 1]},
    {"bits": [1, 0], "valuations": [2, 0.5]},
    {"bits": [1, 1], "valuations": [10, 1]}
  ],
  "checks": ["truthful", "ir", "accuracy"],
  "check_params": {
    "truthful": {"players": "below_threshold"},
    "accuracy": {"gamma_n": [2, 4]}
  }
})";

TEST_F(CliTest, PassingSuiteExitsZeroAndWritesReports) {
  const fs::path cfg = Write("mon.json", kAlg1Mon);
  const Invocation r =
      Cli("run " + cfg.string() + " --out " + (dir_ / "rep").string());
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_THAT(r.out, HasSubstr("overall: pass"));
  const std::string csv = Slurp(dir_ / "rep.csv");
  EXPECT_THAT(csv, HasSubstr(
                       "check,mechanism,profile_id,player,verdict,margin,"
                       "witness\r\n"));
  EXPECT_THAT(Slurp(dir_ / "rep.json"), HasSubstr("\"exit_code\": 0"));
}

TEST_F(CliTest, ReportsAreByteIdenticalAcrossRuns) {
  const fs::path cfg = Write("mon.json", kAlg1Mon);
  ASSERT_EQ(Cli("run " + cfg.string() + " --out " + (dir_ / "a").string())
                .code,
            0);
  ASSERT_EQ(Cli("run " + cfg.string() + " --out " + (dir_ / "b").string())
                .code,
            0);
  EXPECT_EQ(Slurp(dir_ / "a.csv"), Slurp(dir_ / "b.csv"));
  EXPECT_EQ(Slurp(dir_ / "a.json"), Slurp(dir_ / "b.json"));
}

TEST_F(CliTest, PayDeclaredTruthfulnessExitsOne) {
  const fs::path cfg = Write("pd.json", R"({
    "mechanism": "pay_declared",
    "params": {"pay_declared": {"epsilon": 0.5}},
    "loss_model": "dp_bounded_general",
    "profiles": [{"bits": [1, 0], "valuations": [1, 2]}],
    "checks": ["truthful"],
    "check_params": {"truthful": {"extra_deviations": [5]}}
  })");
  EXPECT_EQ(Cli("run " + cfg.string()).code, 1);
}

TEST_F(CliTest, InconclusiveExitsTwo) {
  // tanh(1) = 0.76159415595576...; the straddle needs a coarse tolerance.
  const fs::path cfg = Write("inc.json", R"({
    "mechanism": "pay_declared",
    "params": {"pay_declared": {"epsilon": 2}},
    "profiles": [{"bits": [0, 0], "valuations": [0, 0]}],
    "checks": ["distinguishability"],
    "check_params": {"distinguishability": {"delta": 0.7615941559557649,
                                            "players": "all"}},
    "mass_tol": 0.001
  })");
  EXPECT_EQ(Cli("run " + cfg.string()).code, 2);
}

TEST_F(CliTest, EmptyChecksExitZero) {
  const fs::path cfg = Write("empty.json", R"({
    "mechanism": "constant",
    "profiles": [{"bits": [1], "valuations": [0]}],
    "checks": [],
    "output": {"csv": "unused.csv"}
  })");
  const Invocation r =
      Cli("run " + cfg.string() + " --out " + (dir_ / "e").string());
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(Slurp(dir_ / "e.csv"),
            "check,mechanism,profile_id,player,verdict,margin,witness\r\n");
}

TEST_F(CliTest, MalformedConfigExitsThreeWithLine) {
  const fs::path cfg =
      Write("bad.json", "{\n  \"mechanism\": \"alg1\",\n  ]\n");
  const Invocation r = Cli("run " + cfg.string());
  EXPECT_EQ(r.code, 3);
  EXPECT_THAT(r.out, HasSubstr("bad.json:3:"));
}

TEST_F(CliTest, FieldErrorExitsThree) {
  const fs::path cfg = Write("field.json", R"({
  "mechanism": "alg1",
  "params": {"alg1": {"budget": 4, "n": 2}}
})");
  const Invocation r = Cli("run " + cfg.string());
  EXPECT_EQ(r.code, 3);
  EXPECT_THAT(r.out, HasSubstr("params.alg1.epsilon"));
  EXPECT_EQ(Cli("run " + (dir_ / "missing.json").string()).code, 3);
}

TEST_F(CliTest, SeedOverrideSatisfiesMonteCarlo) {
  const fs::path cfg = Write("mc.json", R"({
    "mechanism": "exact_sum",
    "profiles": [{"bits": [1, 0], "valuations": [0, 0]}],
    "checks": ["accuracy"],
    "check_params": {"accuracy": {"mode": "monte_carlo", "trials": 100,
                                  "alpha": 0.25, "beta": 0.2}}
  })");
  EXPECT_EQ(Cli("run " + cfg.string()).code, 3);
  EXPECT_EQ(Cli("run " + cfg.string() + " --seed 4").code, 0);
}

TEST_F(CliTest, Demos) {
  const Invocation mon = Cli("demo thm_mon");
  EXPECT_EQ(mon.code, 0) << mon.out;
  const Invocation imp = Cli("demo thm_imp");
  EXPECT_EQ(imp.code, 0);
  EXPECT_THAT(imp.out, HasSubstr("first failing premise ir"));
  EXPECT_EQ(Cli("demo subsample").code, 0);
  EXPECT_EQ(Cli("demo nonsense").code, 3);
}

TEST_F(CliTest, DistAndVersion) {
  const Invocation d = Cli("dist --epsilon 0.5 --shift2 3");
  EXPECT_EQ(d.code, 0);
  EXPECT_THAT(d.out, HasSubstr("dp level 1.5"));
  EXPECT_EQ(Cli("dist --epsilon -1").code, 3);
  const Invocation v = Cli("version");
  EXPECT_EQ(v.code, 0);
  EXPECT_THAT(v.out, HasSubstr("monopriv"));
  EXPECT_EQ(Cli("frobnicate").code, 3);
}

}  // namespace
