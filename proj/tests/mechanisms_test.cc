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


#include "monopriv/mechanisms.h"

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "gtest/gtest.h"
#include "monopriv/geometric.h"
#include "nlohmann/json.hpp"

namespace monopriv {
namespace {

using Json = nlohmann::ordered_json;

InputProfile Profile(std::vector<int> bits, std::vector<double> vals) {
  return *InputProfile::FromVectors(bits, vals);
}

// n = 4, B = 8, eps = 0.5: theta = 2 and each included player is paid 2.
MonotonicMechanism Alg1(MonotonicMechanism::Variant variant =
                            MonotonicMechanism::Variant::kStandard) {
  return *MonotonicMechanism::Create({8, 0.5, 4}, variant);
}

TEST(MonotonicMechanismTest, ThresholdAndPayment) {
  const MonotonicMechanism m = Alg1();
  EXPECT_DOUBLE_EQ(*m.valuation_threshold(), 2.0);
  EXPECT_DOUBLE_EQ(m.params().per_player_pay(), 2.0);
  EXPECT_EQ(m.name(), "alg1");
  EXPECT_EQ(*m.player_count(), 4);
  EXPECT_GT(m.AboveThreshold(), 2.0);
}

TEST(MonotonicMechanismTest, HandExample) {
  const MonotonicMechanism m = Alg1();
  // Players 1 and 3 are included (v <= 2); player 2 is excluded, player 4
  // sits exactly on the threshold and is included.
  const InputProfile x = Profile({1, 1, 0, 1}, {0.5, 3, 1, 2});
  EXPECT_EQ(*m.CountedBits(x), 2);
  EXPECT_EQ(*m.ExpectedPayment(x, 0), 2.0);
  EXPECT_EQ(*m.ExpectedPayment(x, 1), 0.0);
  EXPECT_EQ(*m.ExpectedPayment(x, 2), 2.0);
  EXPECT_EQ(*m.ExpectedPayment(x, 3), 2.0);
  const CountDistribution d = *m.OutputDistribution(x, 1e-12);
  const GeomParams g = *GeomParams::Create(0.5);
  for (int k = -5; k <= 9; ++k) {
    EXPECT_DOUBLE_EQ(d.StoredProbability(k), GeomPmf(g, k - 2));
  }
}

TEST(MonotonicMechanismTest, TotalPaymentWithinBudget) {
  const MonotonicMechanism m = Alg1();
  const InputProfile x = Profile({1, 0, 1, 0}, {0, 0, 1, 2});
  double total = 0;
  for (size_t i = 0; i < 4; ++i) total += *m.ExpectedPayment(x, i);
  EXPECT_LE(total, 8.0);
}

TEST(MonotonicMechanismTest, PayZeroBitsVariant) {
  const MonotonicMechanism m =
      Alg1(MonotonicMechanism::Variant::kPayZeroBits);
  EXPECT_EQ(m.name(), "alg1_prime");
  const InputProfile x = Profile({0, 1, 0, 0}, {9, 9, 0, 9});
  EXPECT_EQ(*m.ExpectedPayment(x, 0), 2.0);
  EXPECT_EQ(*m.ExpectedPayment(x, 1), 0.0);
  EXPECT_EQ(*m.ExpectedPayment(x, 2), 2.0);
}

TEST(MonotonicMechanismTest, RejectsWrongPlayerCount) {
  const MonotonicMechanism m = Alg1();
  EXPECT_FALSE(m.OutputDistribution(Profile({1}, {0}), 1e-12).ok());
  EXPECT_FALSE(m.ExpectedPayment(Profile({1, 0, 0, 0}, {0, 0, 0, 0}), 4).ok());
}

TEST(MonotonicMechanismTest, RejectsBadParams) {
  EXPECT_FALSE(MonotonicMechanism::Create({0, 0.5, 4}).ok());
  EXPECT_FALSE(MonotonicMechanism::Create({8, 0, 4}).ok());
  EXPECT_FALSE(MonotonicMechanism::Create({8, 0.5, 0}).ok());
}

TEST(MonotonicMechanismTest, SampleMatchesLawAndIsSeeded) {
  const MonotonicMechanism m = Alg1();
  const InputProfile x = Profile({1, 1, 1, 0}, {0, 0, 5, 0});
  EXPECT_EQ(m.Sample(x, 42)->count, m.Sample(x, 42)->count);
  std::map<int64_t, int> hist;
  constexpr int kDraws = 40000;
  for (uint64_t s = 0; s < kDraws; ++s) ++hist[m.Sample(x, s)->count];
  const CountDistribution d = *m.OutputDistribution(x, 1e-12);
  for (int64_t k = -1; k <= 5; ++k) {
    const double p = d.StoredProbability(k);
    EXPECT_NEAR(hist[k] / static_cast<double>(kDraws), p,
                5 * std::sqrt(p * (1 - p) / kDraws));
  }
  EXPECT_EQ(m.Sample(x, 3)->payments, (std::vector<double>{2, 2, 0, 2}));
}

TEST(MonotonicMechanismTest, CandidateTypesCoverInclusionClasses) {
  const MonotonicMechanism m = Alg1();
  const InputProfile x = Profile({0, 0, 0, 0}, {1, 0, 0, 0});
  bool saw[2][2] = {};
  for (const PlayerType& t : m.CandidateTypes(x, 0)) {
    saw[t.bit][m.Included(t.valuation) ? 1 : 0] = true;
  }
  for (auto& row : saw) {
    for (bool b : row) EXPECT_TRUE(b);
  }
}

// Size-k subset enumeration of (n/k) * ones, rounded half to even.
std::map<int64_t, double> SubsetOracle(const std::vector<int>& bits, int k) {
  const int n = static_cast<int>(bits.size());
  std::map<int64_t, double> law;
  int64_t subsets = 0;
  for (uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) != k) continue;
    ++subsets;
    int ones = 0;
    for (int i = 0; i < n; ++i) {
      if (mask >> i & 1u) ones += bits[i];
    }
    const double scaled = static_cast<double>(n) * ones / k;
    law[static_cast<int64_t>(std::nearbyint(scaled))] += 1;
  }
  for (auto& [c, w] : law) w /= static_cast<double>(subsets);
  return law;
}

TEST(SubsampleMechanismTest, LawMatchesSubsetEnumeration) {
  for (int n = 1; n <= 9; ++n) {
    for (int k = 1; k <= n; ++k) {
      const SubsampleMechanism m = *SubsampleMechanism::Create({0, k});
      for (uint32_t b = 0; b < (1u << n); b += 3) {
        std::vector<int> bits(n);
        for (int i = 0; i < n; ++i) bits[i] = (b >> i) & 1u;
        const InputProfile x =
            *InputProfile::FromVectors(bits, std::vector<double>(n, 0.0));
        const CountDistribution d = *m.OutputDistribution(x, 1e-12);
        const std::map<int64_t, double> oracle = SubsetOracle(bits, k);
        EXPECT_EQ(d.truncation_mass(), 0.0);
        for (int64_t c = d.min_count() - 1; c <= d.max_count() + 1; ++c) {
          const double want = oracle.contains(c) ? oracle.at(c) : 0.0;
          EXPECT_NEAR(d.StoredProbability(c), want, 1e-12)
              << "n=" << n << " k=" << k << " b=" << b << " c=" << c;
        }
      }
    }
  }
}

TEST(SubsampleMechanismTest, RoundHalfEven) {
  EXPECT_EQ(RoundHalfEven(5, 2), 2);
  EXPECT_EQ(RoundHalfEven(7, 2), 4);
  EXPECT_EQ(RoundHalfEven(7, 3), 2);
  EXPECT_EQ(RoundHalfEven(8, 3), 3);
  EXPECT_EQ(RoundHalfEven(0, 5), 0);
}

TEST(SubsampleMechanismTest, ValidatesParams) {
  EXPECT_FALSE(SubsampleMechanism::Create({-1, 2}).ok());
  EXPECT_FALSE(SubsampleMechanism::Create({0, 0}).ok());
  EXPECT_FALSE(SubsampleMechanism::Create({0, 3, 3}).ok());
  EXPECT_TRUE(SubsampleMechanism::Create({0, 2, 3}).ok());
  const SubsampleMechanism m = *SubsampleMechanism::Create({1, 4});
  EXPECT_FALSE(m.OutputDistribution(Profile({1, 0}, {0, 0}), 1e-12).ok());
}

TEST(SubsampleMechanismTest, SampleIsSeededAndPaysFlat) {
  const SubsampleMechanism m = *SubsampleMechanism::Create({1.5, 2});
  const InputProfile x = Profile({1, 0, 1, 1}, {0, 0, 0, 0});
  EXPECT_EQ(m.Sample(x, 9)->count, m.Sample(x, 9)->count);
  EXPECT_EQ(m.Sample(x, 9)->payments, std::vector<double>(4, 1.5));
  EXPECT_EQ(*m.ExpectedPayment(x, 2), 1.5);
}

TEST(PayDeclaredMechanismTest, PaysValuationTimesEpsilon) {
  const PayDeclaredMechanism m = *PayDeclaredMechanism::Create(0.5);
  const InputProfile x = Profile({1, 0}, {3, 10});
  EXPECT_DOUBLE_EQ(*m.ExpectedPayment(x, 0), 1.5);
  EXPECT_DOUBLE_EQ(*m.ExpectedPayment(x, 1), 5.0);
  const CountDistribution d = *m.OutputDistribution(x, 1e-12);
  EXPECT_DOUBLE_EQ(d.StoredProbability(1), std::tanh(0.25));
}

TEST(ExactSumMechanismTest, PointMassAtSum) {
  const ExactSumMechanism m = *ExactSumMechanism::Create(0.25);
  const InputProfile x = Profile({1, 1, 0}, {0, 4, 4});
  EXPECT_EQ(*m.OutputDistribution(x, 1e-12), CountDistribution::PointMass(2));
  EXPECT_EQ(*m.ExpectedPayment(x, 1), 0.25);
  EXPECT_EQ(m.Sample(x, 1)->count, 2);
}

TEST(ConstantMechanismTest, IgnoresInput) {
  const ConstantMechanism m(3);
  const InputProfile x = Profile({1, 1}, {0, 4});
  EXPECT_EQ(*m.OutputDistribution(x, 1e-12), CountDistribution::PointMass(3));
  EXPECT_EQ(*m.ExpectedPayment(x, 0), 0.0);
}

TEST(MakeMechanismTest, BuildsEveryKey) {
  Json alg1 = {{"budget", 8.0}, {"epsilon", 0.5}, {"n", 4}};
  EXPECT_EQ((*MakeMechanism("alg1", alg1))->name(), "alg1");
  EXPECT_EQ((*MakeMechanism("alg1_prime", alg1))->name(), "alg1_prime");
  EXPECT_EQ((*MakeMechanism("subsample", {{"sample_size", 2}}))->name(),
            "subsample");
  EXPECT_EQ((*MakeMechanism("pay_declared", {{"epsilon", 1.0}}))->name(),
            "pay_declared");
  EXPECT_EQ((*MakeMechanism("exact_sum", Json::object()))->name(),
            "exact_sum");
  EXPECT_EQ((*MakeMechanism("constant", Json::object()))->name(), "constant");
}

TEST(MakeMechanismTest, ErrorsNameTheField) {
  const absl::StatusOr<std::unique_ptr<Mechanism>> missing =
      MakeMechanism("alg1", {{"budget", 8.0}, {"n", 4}});
  ASSERT_FALSE(missing.ok());
  EXPECT_NE(missing.status().message().find("epsilon"), std::string::npos);
  EXPECT_FALSE(MakeMechanism("nope", Json::object()).ok());
  EXPECT_FALSE(
      MakeMechanism("alg1", {{"budget", 8.0}, {"epsilon", 0.5}, {"n", 1.5}})
          .ok());
}

TEST(MakeMechanismTest, ParamsJsonRoundTrips) {
  Json alg1 = {{"budget", 8.0}, {"epsilon", 0.5}, {"n", 4}};
  const std::unique_ptr<Mechanism> m = *MakeMechanism("alg1", alg1);
  const std::unique_ptr<Mechanism> again =
      *MakeMechanism("alg1", m->ParamsJson());
  EXPECT_EQ(again->ParamsJson(), m->ParamsJson());
}

}  // namespace
}  // namespace monopriv
