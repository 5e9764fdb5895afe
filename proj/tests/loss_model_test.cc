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


#include "monopriv/loss_model.h"

#include <cmath>
#include <memory>

#include "gtest/gtest.h"
#include "monopriv/mechanisms.h"
#include "nlohmann/json.hpp"

namespace monopriv {
namespace {

using Json = nlohmann::ordered_json;

constexpr double kTol = 1e-12;

InputProfile Profile(std::vector<int> bits, std::vector<double> vals) {
  return *InputProfile::FromVectors(bits, vals);
}

// Geom(eps) facts used as oracles: Pr[N >= 0] = 1 / (1 + e^-eps) and the
// unit-shift distance is tanh(eps / 2).
double PrNonNegative(double eps) { return 1 / (1 + std::exp(-eps)); }

class TightDpTest : public testing::Test {
 protected:
  // n = 4, B = 8, eps = 0.5, theta = 2.
  MonotonicMechanism m_ = *MonotonicMechanism::Create({8, 0.5, 4});
  std::unique_ptr<LossModel> mono_ =
      MakeTightDpLoss(NeighborRelation::kMonotonic);
  std::unique_ptr<LossModel> general_ =
      MakeTightDpLoss(NeighborRelation::kGeneral);
};

TEST_F(TightDpTest, IncludedZeroBitClosedForm) {
  // lambda = v eps on counts <= S and 0 above, so Loss = v eps Pr[N <= 0].
  const InputProfile x = Profile({0, 1, 0, 1}, {1.5, 0, 3, 1});
  const Interval loss = *mono_->Expectation(m_, x, 0, 1.5, kTol);
  EXPECT_NEAR(loss.lo, 1.5 * 0.5 * PrNonNegative(0.5), 1e-9);
  EXPECT_NEAR(loss.hi, 1.5 * 0.5 * PrNonNegative(0.5), 1e-9);
}

TEST_F(TightDpTest, IncludedOneBitClosedForm) {
  // lambda = +v eps on counts >= S, -v eps below: Loss = v eps tanh(eps/2).
  const InputProfile x = Profile({1, 1, 0, 0}, {2, 0, 0, 0});
  const Interval loss = *mono_->Expectation(m_, x, 0, 2, kTol);
  EXPECT_NEAR(loss.lo, 2 * 0.5 * std::tanh(0.25), 1e-9);
  EXPECT_NEAR(loss.hi, 2 * 0.5 * std::tanh(0.25), 1e-9);
}

TEST_F(TightDpTest, ExcludedPlayersUnderMonotonicModel) {
  const InputProfile x = Profile({1, 0, 0, 0}, {5, 7, 0, 0});
  EXPECT_EQ(*mono_->Expectation(m_, x, 0, 5, kTol), (Interval{0, 0}));
  EXPECT_EQ(*mono_->Expectation(m_, x, 1, 7, kTol), (Interval{0, 0}));
  // The general model still sees the (1, included) neighbor of a bit-0
  // player.
  const Interval g = *general_->Expectation(m_, x, 1, 7, kTol);
  EXPECT_NEAR(g.hi, 7 * 0.5 * PrNonNegative(0.5), 1e-9);
}

TEST_F(TightDpTest, BoundedByValuationTimesEpsilon) {
  for (int b = 0; b < 16; ++b) {
    for (double v : {0.0, 1.0, 2.0, 4.0, 20.0}) {
      const InputProfile x =
          Profile({b & 1, b >> 1 & 1, b >> 2 & 1, b >> 3 & 1}, {v, 1, 0, 3});
      for (const LossModel* model : {mono_.get(), general_.get()}) {
        const Interval loss = *model->Expectation(m_, x, 0, v, kTol);
        EXPECT_LE(std::abs(loss.lo), v * 0.5 + 1e-9);
        EXPECT_LE(std::abs(loss.hi), v * 0.5 + 1e-9);
      }
    }
  }
}

TEST_F(TightDpTest, ZeroValuationIsZero) {
  const InputProfile x = Profile({1, 0, 0, 0}, {0, 0, 0, 0});
  EXPECT_EQ(*mono_->Expectation(m_, x, 0, 5, kTol), (Interval{0, 0}));
}

TEST_F(TightDpTest, PointwiseValues) {
  const InputProfile x = Profile({0, 0, 0, 0}, {1, 0, 0, 0});
  // S = 0: lambda / v is eps at s <= 0 and 0 above.
  EXPECT_NEAR(**TightDpLossAt(m_, NeighborRelation::kMonotonic, x, 0, -3,
                              kTol),
              0.5, 1e-12);
  EXPECT_NEAR(**TightDpLossAt(m_, NeighborRelation::kMonotonic, x, 0, 2,
                              kTol),
              0.0, 1e-12);
}

TEST_F(TightDpTest, Properties) {
  EXPECT_TRUE(mono_->properties().bounded_by_dp_monotonic);
  EXPECT_FALSE(general_->properties().bounded_by_dp_monotonic);
  EXPECT_TRUE(general_->properties().bounded_by_dp);
  EXPECT_EQ(mono_->kind(), LossKind::kDpBoundedMonotonic);
}

TEST_F(TightDpTest, RejectsNonFiniteDeclaration) {
  const InputProfile x = Profile({0, 0, 0, 0}, {1, 0, 0, 0});
  EXPECT_FALSE(mono_->Expectation(m_, x, 0, INFINITY, kTol).ok());
}

TEST(TightDpExactSumTest, SupportMismatchIsInfinite) {
  const ExactSumMechanism m = *ExactSumMechanism::Create();
  const std::unique_ptr<LossModel> model =
      MakeTightDpLoss(NeighborRelation::kGeneral);
  const Interval loss =
      *model->Expectation(m, Profile({1, 0}, {1, 0}), 0, 1, kTol);
  EXPECT_EQ(loss.lo, INFINITY);
}

TEST(IncreasingThresholdTest, DistinguishableInputsPayValuation) {
  const ExactSumMechanism m = *ExactSumMechanism::Create();
  const std::unique_ptr<LossModel> model =
      *MakeIncreasingThresholdLoss(0.1, NeighborRelation::kGeneral);
  EXPECT_EQ(*model->Expectation(m, Profile({1, 0}, {3, 0}), 0, 3, kTol),
            (Interval{3, 3}));
  EXPECT_EQ(*model->Threshold(2, Profile({1, 0}, {3, 0}), 0), 3.0);
  EXPECT_TRUE(model->properties().respects_indifference);
}

TEST(IncreasingThresholdTest, IndistinguishableInputsAreFree) {
  const ConstantMechanism m;
  const std::unique_ptr<LossModel> model =
      *MakeIncreasingThresholdLoss(0.1, NeighborRelation::kGeneral);
  EXPECT_EQ(*model->Expectation(m, Profile({1, 0}, {3, 0}), 0, 3, kTol),
            (Interval{0, 0}));
}

TEST(IncreasingThresholdTest, AffineThresholdShapesLoss) {
  const ExactSumMechanism m = *ExactSumMechanism::Create();
  const std::unique_ptr<LossModel> model = *MakeIncreasingThresholdLoss(
      0.1, NeighborRelation::kGeneral, AffineThreshold{2, 3});
  // (v - 3) / 2 + 1 at v = 7.
  EXPECT_EQ(*model->Expectation(m, Profile({1, 0}, {7, 0}), 0, 7, kTol),
            (Interval{3, 3}));
  EXPECT_EQ(*model->Expectation(m, Profile({1, 0}, {1, 0}), 0, 1, kTol),
            (Interval{0, 0}));
  EXPECT_FALSE(MakeIncreasingThresholdLoss(0.1, NeighborRelation::kGeneral,
                                           AffineThreshold{0, 1})
                   .ok());
  EXPECT_FALSE(MakeIncreasingThresholdLoss(0, NeighborRelation::kGeneral).ok());
}

TEST(IncreasingThresholdTest, TruncationStraddlingDeltaIsUndecided) {
  // eps = 2: the unit-shift distance tanh(1) lies inside its own slack only
  // when delta is placed right at it with a coarse tolerance.
  const PayDeclaredMechanism m = *PayDeclaredMechanism::Create(2.0);
  const std::unique_ptr<LossModel> model = *MakeIncreasingThresholdLoss(
      std::tanh(1.0), NeighborRelation::kGeneral);
  const Interval loss =
      *model->Expectation(m, Profile({1, 0}, {4, 0}), 0, 4, 1e-3);
  EXPECT_EQ(loss.lo, 0);
  EXPECT_EQ(loss.hi, 4);
}

TEST(GrowingSdTest, IncludedPlayerLossIsValuationTimesUnitDistance) {
  const MonotonicMechanism m = *MonotonicMechanism::Create({8, 0.5, 4});
  const std::unique_ptr<LossModel> model = MakeGrowingSdLoss();
  const InputProfile x = Profile({0, 0, 1, 1}, {1, 0, 0, 0});
  const Interval loss = *model->Expectation(m, x, 0, 1, kTol);
  EXPECT_NEAR(loss.lo, std::tanh(0.25), 1e-9);
  EXPECT_NEAR(loss.hi, std::tanh(0.25), 1e-9);
  const Interval direct = *GrowingSdLoss(m, x, 0, kTol);
  EXPECT_EQ(direct, loss);
  EXPECT_TRUE(model->properties().growing_with_sd);
}

TEST(GrowingSdTest, ExcludedPlayerWithExcludedNeighborsIsZero) {
  const MonotonicMechanism m = *MonotonicMechanism::Create({8, 0.5, 4});
  const std::unique_ptr<LossModel> model = MakeGrowingSdLoss();
  const InputProfile x = Profile({0, 0, 1, 1}, {10, 0, 0, 0});
  EXPECT_EQ(*model->Expectation(m, x, 0, 10, kTol), (Interval{0, 0}));
}

TEST(ZeroLossTest, AlwaysZero) {
  const ExactSumMechanism m = *ExactSumMechanism::Create();
  EXPECT_EQ(*MakeZeroLoss()->Expectation(m, Profile({1}, {9}), 0, 9, kTol),
            (Interval{0, 0}));
}

TEST(MakeLossModelTest, Keys) {
  EXPECT_EQ((*MakeLossModel("zero", Json()))->kind(), LossKind::kZero);
  EXPECT_EQ((*MakeLossModel("dp_bounded_general", Json()))->kind(),
            LossKind::kDpBoundedGeneral);
  EXPECT_EQ((*MakeLossModel("dp_bounded_monotonic", Json()))->kind(),
            LossKind::kDpBoundedMonotonic);
  EXPECT_EQ((*MakeLossModel("growing_sd_monotonic", Json()))->kind(),
            LossKind::kGrowingSdMonotonic);
  EXPECT_EQ((*MakeLossModel("increasing_with_threshold", {{"delta", 0.1}}))
                ->kind(),
            LossKind::kIncreasingWithThreshold);
}

TEST(MakeLossModelTest, Errors) {
  EXPECT_FALSE(MakeLossModel("bogus", Json()).ok());
  const absl::StatusOr<std::unique_ptr<LossModel>> missing =
      MakeLossModel("increasing_with_threshold", Json::object());
  ASSERT_FALSE(missing.ok());
  EXPECT_NE(missing.status().message().find("delta"), std::string::npos);
  EXPECT_FALSE(MakeLossModel("increasing_with_threshold",
                             {{"delta", 0.1}, {"relation", "sideways"}})
                   .ok());
}

}  // namespace
}  // namespace monopriv
