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


#include "monopriv/audits.h"

#include <cmath>
#include <memory>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "monopriv/loss_model.h"
#include "monopriv/mechanisms.h"
#include "nlohmann/json.hpp"

namespace monopriv {
namespace {

using ::testing::HasSubstr;

std::unique_ptr<LossModel> Increasing(double delta, NeighborRelation r) {
  return *MakeIncreasingThresholdLoss(delta, r);
}

const PremiseCheck& FirstFailure(const AuditReport& a) {
  return a.checks.at(a.first_failure.value());
}

class GeneralAuditTest : public testing::TestWithParam<int> {};

TEST_P(GeneralAuditTest, ExactSumFlaggedAtIr) {
  const size_t n = GetParam();
  const ExactSumMechanism m = *ExactSumMechanism::Create();
  const auto model = Increasing(1.0 / (6 * n), NeighborRelation::kGeneral);
  const AuditReport a = *AuditGeneralImpossibility(m, *model, n);
  EXPECT_EQ(a.chain.inputs.size(), 2 * n + 1);
  EXPECT_TRUE(a.chain.Validate().ok());
  EXPECT_EQ(a.chain.end_to_end, (Interval{1, 1}));
  EXPECT_DOUBLE_EQ(a.delta, 1.0 / (6 * n));
  EXPECT_EQ(a.conclusion, AuditConclusion::kPremiseViolated);
  EXPECT_EQ(a.failed_premise(), Premise::kIr);
  EXPECT_EQ(FirstFailure(a).hybrid, "x(1,1)");
  EXPECT_EQ(FirstFailure(a).player, 1);
  EXPECT_EQ(a.verdict(), Verdict::kPass);
  // Every premise before IR holds.
  for (const PremiseCheck& c : a.checks) {
    if (c.premise != Premise::kIr && c.premise != Premise::kAccuracy) {
      EXPECT_EQ(c.verdict, Verdict::kPass) << c.hybrid;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(SmallN, GeneralAuditTest, testing::Values(2, 3));

TEST(GeneralAuditTest, ChainShape) {
  const ExactSumMechanism m = *ExactSumMechanism::Create();
  const auto model = Increasing(1.0 / 12, NeighborRelation::kGeneral);
  const AuditReport a = *AuditGeneralImpossibility(m, *model, 2);
  // x(1,0) = 0^n; x(i,1) turns bit i on at valuation L; x(n+1,0) = 1^n.
  EXPECT_EQ(a.chain.labels.front(), "x(1,0)");
  EXPECT_EQ(a.chain.labels.back(), "x(3,0)");
  EXPECT_EQ(a.chain.inputs.front().BitSum(), 0);
  EXPECT_EQ(a.chain.inputs.back().BitSum(), 2);
  EXPECT_EQ(a.chain.inputs[1][0], (PlayerType{1, 1}));
  EXPECT_EQ(a.chain.inputs[2][0], (PlayerType{1, 0}));
}

TEST(GeneralAuditTest, Alg1FlaggedAtIrWithWitness) {
  const MonotonicMechanism m =
      *MonotonicMechanism::Create({4, std::log(2.0), 2});
  const auto model = Increasing(1.0 / 12, NeighborRelation::kGeneral);
  const AuditReport a = *AuditGeneralImpossibility(m, *model, 2);
  EXPECT_EQ(a.failed_premise(), Premise::kIr);
  EXPECT_THAT(FirstFailure(a).detail, HasSubstr("distinguishable"));
  EXPECT_LT(FirstFailure(a).margin, 0);
}

TEST(GeneralAuditTest, IsDeterministic) {
  const MonotonicMechanism m =
      *MonotonicMechanism::Create({4, std::log(2.0), 2});
  const auto model = Increasing(1.0 / 12, NeighborRelation::kGeneral);
  EXPECT_EQ(AuditToJson(*AuditGeneralImpossibility(m, *model, 2)).dump(),
            AuditToJson(*AuditGeneralImpossibility(m, *model, 2)).dump());
}

TEST(GeneralAuditTest, NeedsThresholdModel) {
  const ExactSumMechanism m = *ExactSumMechanism::Create();
  EXPECT_FALSE(AuditGeneralImpossibility(m, *MakeGrowingSdLoss(), 2).ok());
  const auto model = Increasing(0.1, NeighborRelation::kGeneral);
  EXPECT_FALSE(AuditGeneralImpossibility(m, *model, 0).ok());
}

TEST(GeneralAuditTest, ConstantMechanismRespectsImpossibility) {
  const ConstantMechanism m;
  const auto model = Increasing(1.0 / 12, NeighborRelation::kGeneral);
  const AuditReport a = *AuditGeneralImpossibility(m, *model, 2);
  EXPECT_EQ(a.conclusion, AuditConclusion::kImpossibilityRespected);
  EXPECT_EQ(a.failed_premise(), Premise::kAccuracy);
}

TEST(MonotonicAuditTest, Alg1StepsVanishAndEndpointAccuracyFails) {
  const MonotonicMechanism m =
      *MonotonicMechanism::Create({4, std::log(2.0), 2});
  const auto model = Increasing(1.0 / 6, NeighborRelation::kMonotonic);
  const AuditReport a = *AuditMonotonicImpossibility(m, *model, 2);
  EXPECT_TRUE(a.chain.Validate().ok());
  for (const Interval& d : a.chain.step_distances) {
    EXPECT_TRUE(d.Contains(0));
    EXPECT_LE(d.hi, 1e-12);
  }
  EXPECT_EQ(a.conclusion, AuditConclusion::kImpossibilityRespected);
  const PremiseCheck& last = a.checks.back();
  EXPECT_EQ(last.premise, Premise::kAccuracy);
  EXPECT_EQ(last.hybrid, "x(3,0)");
  EXPECT_EQ(last.verdict, Verdict::kFail);
  // The endpoint is (1^n, L^n) with every L above the threshold.
  for (const PlayerType& p : a.chain.inputs.back().players()) {
    EXPECT_EQ(p.bit, 1);
    EXPECT_GT(p.valuation, *m.valuation_threshold());
  }
}

TEST(MonotonicAuditTest, SubsampleLosesIr) {
  const SubsampleMechanism m = *SubsampleMechanism::Create({1, 2, 3});
  const auto model = Increasing(1.0 / 18, NeighborRelation::kMonotonic);
  const AuditReport a = *AuditMonotonicImpossibility(m, *model, 6);
  EXPECT_EQ(a.failed_premise(), Premise::kIr);
  EXPECT_EQ(a.chain.end_to_end, (Interval{1, 1}));
  bool mentions_ratio = false;
  for (const std::string& note : a.notes) {
    if (note.find("k/n") != std::string::npos) mentions_ratio = true;
  }
  EXPECT_TRUE(mentions_ratio);
}

TEST(TradeoffParamsTest, Validate) {
  const TradeoffParams ok{10, 0.125, 0.25, 0.3, std::nullopt};
  EXPECT_TRUE(ok.Validate(8, 1).ok());
  // beta must stay below 1/2 - (P / tau) gamma n = 0.4.
  EXPECT_FALSE((TradeoffParams{10, 0.125, 0.25, 0.4, {}}).Validate(8, 1).ok());
  // eta n must be integral.
  EXPECT_FALSE((TradeoffParams{10, 0.125, 0.3, 0.1, {}}).Validate(8, 1).ok());
  // eta + 2 gamma <= 1.
  EXPECT_FALSE((TradeoffParams{10, 0.5, 0.25, 0.1, {}}).Validate(8, 1).ok());
  EXPECT_FALSE((TradeoffParams{0, 0.125, 0.25, 0.1, {}}).Validate(8, 1).ok());
}

TEST(TradeoffAuditTest, Alg1CertifiedInaccurate) {
  // n = 8, B = 8, eps = 0.5: theta = 1 and P = B/n = 1 < tau = 10.
  const MonotonicMechanism m = *MonotonicMechanism::Create({8, 0.5, 8});
  const TradeoffParams params{10, 0.125, 0.25, 0.3, std::nullopt};
  const AuditReport a =
      *AuditPaymentAccuracyTradeoff(m, *MakeGrowingSdLoss(), 8, params);
  EXPECT_EQ(a.chain.inputs.size(), 2 + 2 + 1);
  ASSERT_TRUE(a.final_failure.has_value());
  ASSERT_TRUE(a.certified_beta_sup.has_value());
  EXPECT_DOUBLE_EQ(*a.certified_beta_sup, 0.4);

  // Oracle: the final hybrid counts no bits, its window is (1, 5), so it
  // fails unless the noise lands in {2, 3, 4}.
  double z = 0, inside = 0;
  for (int k = -400; k <= 400; ++k) {
    z += std::exp(-0.5 * std::abs(k));
    if (k >= 2 && k <= 4) inside += std::exp(-0.5 * std::abs(k));
  }
  const double oracle = 1 - inside / z;
  EXPECT_TRUE(
      (Interval{a.final_failure->lo - 1e-12, a.final_failure->hi + 1e-12})
          .Contains(oracle));
  EXPECT_GE(a.final_failure->lo, 0.4);
  EXPECT_EQ(a.conclusion, AuditConclusion::kImpossibilityRespected);
}

TEST(TradeoffAuditTest, NeedsGrowingModel) {
  const MonotonicMechanism m = *MonotonicMechanism::Create({8, 0.5, 8});
  const TradeoffParams params{10, 0.125, 0.25, 0.3, std::nullopt};
  EXPECT_FALSE(AuditPaymentAccuracyTradeoff(
                   m, *MakeTightDpLoss(NeighborRelation::kMonotonic), 8,
                   params)
                   .ok());
}

TEST(TradeoffAuditTest, ExactSumLosesIr) {
  const ExactSumMechanism m = *ExactSumMechanism::Create(1);
  const TradeoffParams params{10, 0.125, 0.25, 0.3, std::nullopt};
  const AuditReport a =
      *AuditPaymentAccuracyTradeoff(m, *MakeGrowingSdLoss(), 8, params);
  EXPECT_EQ(a.failed_premise(), Premise::kIr);
}

TEST(MaxZeroValuationPaymentTest, Values) {
  EXPECT_EQ(*MaxZeroValuationPayment(
                *MonotonicMechanism::Create({8, 0.5, 4}), 4),
            2.0);
  EXPECT_EQ(*MaxZeroValuationPayment(*ExactSumMechanism::Create(1.5), 3),
            1.5);
  EXPECT_EQ(*MaxZeroValuationPayment(ConstantMechanism(), 20), 0.0);
}

TEST(HybridChainTest, ValidateRejectsDoubleSteps) {
  HybridChain c;
  c.inputs = {*InputProfile::Create({{0, 0}, {0, 0}}),
              *InputProfile::Create({{1, 0}, {1, 0}})};
  c.labels = {"a", "b"};
  c.step_distances = {Interval{0, 0}};
  EXPECT_FALSE(c.Validate().ok());
  c.inputs[1] = *InputProfile::Create({{1, 0}, {0, 0}});
  EXPECT_TRUE(c.Validate().ok());
  c.end_to_end = {0.5, 0.5};
  EXPECT_FALSE(c.Validate().ok());
}

TEST(PremiseTest, NamesRoundTrip) {
  for (Premise p : {Premise::kPayments, Premise::kTruthfulIndifferent,
                    Premise::kIr, Premise::kAccuracy}) {
    EXPECT_EQ(*ParsePremise(PremiseName(p)), p);
  }
  EXPECT_FALSE(ParsePremise("nope").ok());
}

TEST(AuditRenderTest, JsonAndTable) {
  const ExactSumMechanism m = *ExactSumMechanism::Create();
  const auto model = Increasing(1.0 / 12, NeighborRelation::kGeneral);
  const AuditReport a = *AuditGeneralImpossibility(m, *model, 2);
  const nlohmann::ordered_json j = AuditToJson(a);
  EXPECT_EQ(j["audit"], "general");
  EXPECT_EQ(j["conclusion"], "premise violated");
  EXPECT_EQ(j["chain"].size(), 5);
  const std::string table = RenderAudit(a);
  EXPECT_THAT(table, HasSubstr("x(2,1)"));
  EXPECT_THAT(table, HasSubstr("conclusion: premise violated"));
}

}  // namespace
}  // namespace monopriv
