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


#include "monopriv/config.h"

#include <filesystem>
#include <fstream>
#include <cmath>
#include <string>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "monopriv/report.h"
#include "monopriv/runner.h"

namespace monopriv {
namespace {

using ::testing::HasSubstr;
using ::testing::StartsWith;

constexpr char kAlg1Suite[] = R"({
  "mechanism": "alg1",
  "params": {"alg1": {"budget": 4, "epsilon": 0.5, "n": 2}},
  "loss_model": "dp_bounded_monotonic",
  "profiles": [
    {"id": "low", "bits": [1, 0], "valuations": [0.5, 2]},
    {"bits": [0, 1], "valuations": [8, 1]},
    {"bits": [1, 1], "valuations": [0, 0]}
  ],
  "checks": ["truthful", "ir", "accuracy", "dp"],
  "check_params": {
    "truthful": {"players": "below_threshold"},
    "accuracy": {"gamma_n": [2, 4]}
  }
})";

std::string StatusText(const absl::Status& s) {
  return std::string(s.message());
}

TEST(ParseConfigTest, ReadsFields) {
  const RunConfig c = *ParseConfig(kAlg1Suite);
  EXPECT_EQ(c.mechanism, "alg1");
  ASSERT_EQ(c.profiles.size(), 3);
  EXPECT_EQ(c.profiles[0].id, "low");
  EXPECT_EQ(c.profiles[1].id, "p2");
  EXPECT_EQ(c.checks.size(), 4);
  EXPECT_EQ(c.mass_tol, 1e-12);
  EXPECT_FALSE(c.seed.has_value());
}

TEST(ParseConfigTest, MalformedJsonReportsLine) {
  const absl::Status s =
      ParseConfig("{\n  \"mechanism\": \"alg1\",\n  oops\n}", "cfg.json")
          .status();
  EXPECT_THAT(StatusText(s), StartsWith("cfg.json:3: malformed JSON"));
}

TEST(ParseConfigTest, FieldErrorsReportLineAndPath) {
  std::string text = kAlg1Suite;
  text.replace(text.find("\"epsilon\": 0.5"), 14, "\"epsilon\": -1");
  const absl::Status s = ParseConfig(text, "cfg.json").status();
  EXPECT_THAT(StatusText(s), StartsWith("cfg.json:3:"));
  EXPECT_THAT(StatusText(s), HasSubstr("epsilon"));
}

TEST(ParseConfigTest, RejectsUnknownKeys) {
  EXPECT_THAT(StatusText(ParseConfig(R"({"mechanism": "constant",
      "colour": 1})").status()),
              HasSubstr("unknown top-level key"));
  EXPECT_THAT(StatusText(ParseConfig(R"({"mechanism": "constant",
      "checks": ["ir"], "check_params": {"ir": {"speed": 2}}})")
                             .status()),
              HasSubstr("check_params.ir.speed"));
  EXPECT_FALSE(ParseConfig(R"({"mechanism": "constant",
      "checks": ["fly"]})").ok());
}

TEST(ParseConfigTest, ProfileSizeMismatchNamesProfile) {
  const absl::Status s = ParseConfig(R"({
    "mechanism": "alg1",
    "params": {"alg1": {"budget": 4, "epsilon": 0.5, "n": 2}},
    "profiles": [{"bits": [1], "valuations": [0]}]
  })").status();
  EXPECT_THAT(StatusText(s), HasSubstr("profiles[0]"));
}

TEST(ParseConfigTest, MonteCarloNeedsSeed) {
  constexpr char kText[] = R"({
    "mechanism": "exact_sum",
    "profiles": [{"bits": [1, 0], "valuations": [0, 0]}],
    "checks": ["accuracy"],
    "check_params": {"accuracy": {"mode": "monte_carlo", "alpha": 0.5,
                                  "beta": 0.1}}
  })";
  EXPECT_THAT(StatusText(ParseConfig(kText).status()), HasSubstr("seed"));
  std::string seeded = kText;
  seeded.insert(seeded.rfind('}'), ", \"seed\": 5");
  EXPECT_TRUE(ParseConfig(seeded).ok());
}

TEST(ParseConfigTest, ThresholdFilterNeedsThresholdMechanism) {
  const absl::Status s = ParseConfig(R"({
    "mechanism": "exact_sum",
    "checks": ["ir"],
    "check_params": {"ir": {"players": "below_threshold"}}
  })").status();
  EXPECT_THAT(StatusText(s), HasSubstr("threshold"));
}

TEST(ParseConfigTest, SeedMustBeUnsigned) {
  EXPECT_FALSE(ParseConfig(R"({"mechanism": "constant", "seed": -1})").ok());
  EXPECT_FALSE(ParseConfig(R"({"mechanism": "constant", "seed": 1.5})").ok());
  EXPECT_FALSE(
      ParseConfig(R"({"mechanism": "constant", "mass_tol": 2})").ok());
}

TEST(LoadConfigFileTest, ResolvesProfilesFileRelativeToConfig) {
  const std::filesystem::path dir =
      std::filesystem::path(testing::TempDir()) / "monopriv_cfg";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "more.json")
      << R"([{"id": "f1", "bits": [1, 1], "valuations": [0, 0]}])";
  std::ofstream(dir / "run.json") << R"({
    "mechanism": "exact_sum",
    "profiles": [{"bits": [0, 0], "valuations": [0, 0]}],
    "profiles_file": "more.json"
  })";
  const absl::StatusOr<RunConfig> c =
      LoadConfigFile((dir / "run.json").string());
  ASSERT_TRUE(c.ok()) << c.status();
  ASSERT_EQ(c->profiles.size(), 2);
  EXPECT_EQ(c->profiles[1].id, "f1");
  EXPECT_FALSE(LoadConfigFile((dir / "absent.json").string()).ok());
}

TEST(RunTest, Alg1SuitePasses) {
  const RunResult r = *monopriv::Run(*ParseConfig(kAlg1Suite));
  EXPECT_EQ(r.report.ExitCode(), 0);
  EXPECT_FALSE(r.report.rows.empty());
  // Truthful runs only for below-threshold players; profile p2's first
  // player (v = 8) is skipped.
  for (const ReportRow& row : r.report.rows) {
    if (row.check == "truthful") {
      EXPECT_FALSE(row.profile_id == "p2" && row.player == 1u);
    }
  }
}

TEST(RunTest, PayDeclaredTruthfulnessFails) {
  const RunResult r = *monopriv::Run(*ParseConfig(R"({
    "mechanism": "pay_declared",
    "params": {"pay_declared": {"epsilon": 0.5}},
    "loss_model": "dp_bounded_general",
    "profiles": [{"bits": [1, 0], "valuations": [1, 2]}],
    "checks": ["truthful"],
    "check_params": {"truthful": {"extra_deviations": [10]}}
  })"));
  EXPECT_EQ(r.report.ExitCode(), 1);
  EXPECT_THAT(r.report.rows[0].witness, HasSubstr("declare 10"));
}

TEST(RunTest, EmptyChecksGiveEmptyReport) {
  const RunResult r = *monopriv::Run(*ParseConfig(R"({
    "mechanism": "constant",
    "profiles": [{"bits": [1], "valuations": [0]}]
  })"));
  EXPECT_TRUE(r.report.rows.empty());
  EXPECT_EQ(r.report.ExitCode(), 0);
}

TEST(RunTest, AuditExpectationDrivesVerdict) {
  constexpr char kText[] = R"({
    "mechanism": "exact_sum",
    "loss_model": "increasing_with_threshold",
    "loss_params": {"increasing_with_threshold": {"delta": 0.0833}},
    "checks": ["audit_general"],
    "check_params": {"audit_general": {"n": 2, "expect": "EXPECT"}}
  })";
  auto run = [&](const std::string& expect) {
    std::string text = kText;
    text.replace(text.find("EXPECT"), 6, expect);
    return monopriv::Run(*ParseConfig(text))->report.rows.at(0).verdict;
  };
  EXPECT_EQ(run("ir"), Verdict::kPass);
  EXPECT_EQ(run("accuracy"), Verdict::kFail);
}

TEST(RunTest, MonteCarloIsReproducible) {
  const RunConfig c = *ParseConfig(R"({
    "mechanism": "alg1",
    "params": {"alg1": {"budget": 4, "epsilon": 0.5, "n": 2}},
    "profiles": [{"bits": [1, 0], "valuations": [0, 0]},
                 {"bits": [1, 1], "valuations": [0, 0]}],
    "checks": ["accuracy"],
    "check_params": {"accuracy": {"mode": "monte_carlo", "trials": 500,
                                  "gamma_n": 2}},
    "seed": 99
  })");
  EXPECT_EQ(ReportToCsv(monopriv::Run(c)->report),
            ReportToCsv(monopriv::Run(c)->report));
}

TEST(RoundTripTest, SerializedConfigGivesIdenticalReport) {
  const RunConfig original = *ParseConfig(kAlg1Suite);
  const std::string serialized = ConfigToJson(original).dump(2);
  const RunConfig reread = *ParseConfig(serialized);
  EXPECT_EQ(ConfigToJson(reread).dump(2), serialized);
  EXPECT_EQ(ReportToCsv(monopriv::Run(original)->report),
            ReportToCsv(monopriv::Run(reread)->report));
  EXPECT_EQ(ReportToJson(monopriv::Run(original)->report).dump(),
            ReportToJson(monopriv::Run(reread)->report).dump());
}

TEST(RoundTripTest, DemoConfigsRoundTrip) {
  for (const std::string& name : DemoNames()) {
    const std::vector<RunConfig> configs = *DemoConfigs(name);
    for (const RunConfig& c : configs) {
      const std::string text = ConfigToJson(c).dump();
      const absl::StatusOr<RunConfig> back = ParseConfig(text);
      ASSERT_TRUE(back.ok()) << name << ": " << back.status();
      EXPECT_EQ(ConfigToJson(*back).dump(), text) << name;
    }
  }
  EXPECT_FALSE(DemoConfigs("bogus").ok());
}

TEST(DistCalculatorTest, ReportsDistanceAndLevel) {
  const std::string text = *DistCalculator({std::log(2.0), 0, 2, 1e-12});
  EXPECT_THAT(text, HasSubstr("statistical distance in [0.4"));
  EXPECT_THAT(text, HasSubstr("dp level 1.386"));
  EXPECT_FALSE(DistCalculator({0, 0, 1, 1e-12}).ok());
}

}  // namespace
}  // namespace monopriv
