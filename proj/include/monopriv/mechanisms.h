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

// Concrete mechanisms for buying data bits.
//
//   alg1          budget-threshold mechanism for monotonic valuations
//   alg1_prime    same, but every bit-0 player is paid regardless of valuation
//   subsample     flat payment, scaled count over a random size-k subset
//   pay_declared  pays each player v_i * epsilon (individually rational but
//                 untruthful baseline)
//   exact_sum     noiseless sum with a flat payment (default zero)
//   constant      always outputs a fixed count and pays nothing

#ifndef MONOPRIV_MECHANISMS_H_
#define MONOPRIV_MECHANISMS_H_

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "monopriv/geometric.h"
#include "monopriv/mechanism.h"

namespace monopriv {

struct BudgetParams {
  double budget = 0;
  double epsilon = 0;
  int64_t n = 0;

  absl::Status Validate() const;

  // B / (2 epsilon n): players at or below it are included and paid.
  double threshold() const {
    return budget / (2.0 * epsilon * static_cast<double>(n));
  }
  // B / n.
  double per_player_pay() const { return budget / static_cast<double>(n); }
};

// Budget-threshold mechanism. Players with valuation <= threshold() have
// their bit counted and are paid B/n; everyone else is counted as 0 and paid
// nothing. The count is released with Geom(epsilon) noise.
//
// With Variant::kPayZeroBits every bit-0 player is paid B/n whatever their
// valuation. Payments then reveal the data bit to whoever makes them.
class MonotonicMechanism final : public Mechanism {
 public:
  enum class Variant { kStandard, kPayZeroBits };

  static absl::StatusOr<MonotonicMechanism> Create(
      BudgetParams params, Variant variant = Variant::kStandard);

  absl::string_view name() const override;
  std::optional<size_t> player_count() const override {
    return static_cast<size_t>(params_.n);
  }
  absl::StatusOr<CountDistribution> OutputDistribution(
      const InputProfile& x, double mass_tol) const override;
  absl::StatusOr<double> ExpectedPayment(const InputProfile& x,
                                         size_t i) const override;
  absl::StatusOr<Outcome> Sample(const InputProfile& x,
                                 uint64_t seed) const override;
  std::vector<PlayerType> CandidateTypes(const InputProfile& x,
                                         size_t i) const override;
  std::optional<double> epsilon() const override { return params_.epsilon; }
  std::optional<double> valuation_threshold() const override {
    return params_.threshold();
  }
  nlohmann::ordered_json ParamsJson() const override;

  const BudgetParams& params() const { return params_; }
  Variant variant() const { return variant_; }

  // Whether a declared valuation clears the threshold (ties included).
  bool Included(double valuation) const {
    return valuation <= params_.threshold();
  }

  // Sum of the counted bits b'_i, i.e. the noise-free part of the output.
  absl::StatusOr<int64_t> CountedBits(const InputProfile& x) const;

  // Smallest valuation strictly above the threshold.
  double AboveThreshold() const;

 private:
  MonotonicMechanism(BudgetParams params, Variant variant, GeomParams geom)
      : params_(params), variant_(variant), geom_(geom) {}

  BudgetParams params_;
  Variant variant_;
  GeomParams geom_;
};

struct SubsampleParams {
  double flat_pay = 0;
  int64_t sample_size = 1;
  // Distinguishability budget C; the sample size must stay below it.
  double distinguishability_budget = std::numeric_limits<double>::infinity();

  absl::Status Validate() const;
};

// (n / k) * sum of bits in a uniformly random size-k subset, rounded half to
// even. Ignores declarations; pays everyone flat_pay.
class SubsampleMechanism final : public Mechanism {
 public:
  static absl::StatusOr<SubsampleMechanism> Create(SubsampleParams params);

  absl::string_view name() const override { return "subsample"; }
  absl::StatusOr<CountDistribution> OutputDistribution(
      const InputProfile& x, double mass_tol) const override;
  absl::StatusOr<double> ExpectedPayment(const InputProfile& x,
                                         size_t i) const override;
  absl::StatusOr<Outcome> Sample(const InputProfile& x,
                                 uint64_t seed) const override;
  std::vector<PlayerType> CandidateTypes(const InputProfile& x,
                                         size_t i) const override;
  nlohmann::ordered_json ParamsJson() const override;

  const SubsampleParams& params() const { return params_; }

 private:
  explicit SubsampleMechanism(SubsampleParams params) : params_(params) {}

  SubsampleParams params_;
};

// round(num / den) with ties to even; den > 0, num >= 0.
int64_t RoundHalfEven(int64_t num, int64_t den);

class PayDeclaredMechanism final : public Mechanism {
 public:
  static absl::StatusOr<PayDeclaredMechanism> Create(double epsilon);

  absl::string_view name() const override { return "pay_declared"; }
  absl::StatusOr<CountDistribution> OutputDistribution(
      const InputProfile& x, double mass_tol) const override;
  absl::StatusOr<double> ExpectedPayment(const InputProfile& x,
                                         size_t i) const override;
  absl::StatusOr<Outcome> Sample(const InputProfile& x,
                                 uint64_t seed) const override;
  std::vector<PlayerType> CandidateTypes(const InputProfile& x,
                                         size_t i) const override;
  std::optional<double> epsilon() const override { return geom_.epsilon(); }
  nlohmann::ordered_json ParamsJson() const override;

 private:
  explicit PayDeclaredMechanism(GeomParams geom) : geom_(geom) {}

  GeomParams geom_;
};

class ExactSumMechanism final : public Mechanism {
 public:
  static absl::StatusOr<ExactSumMechanism> Create(double flat_pay = 0);

  absl::string_view name() const override { return "exact_sum"; }
  absl::StatusOr<CountDistribution> OutputDistribution(
      const InputProfile& x, double mass_tol) const override;
  absl::StatusOr<double> ExpectedPayment(const InputProfile& x,
                                         size_t i) const override;
  absl::StatusOr<Outcome> Sample(const InputProfile& x,
                                 uint64_t seed) const override;
  std::vector<PlayerType> CandidateTypes(const InputProfile& x,
                                         size_t i) const override;
  nlohmann::ordered_json ParamsJson() const override;

  double flat_pay() const { return flat_pay_; }

 private:
  explicit ExactSumMechanism(double flat_pay) : flat_pay_(flat_pay) {}

  double flat_pay_;
};

class ConstantMechanism final : public Mechanism {
 public:
  explicit ConstantMechanism(int64_t output = 0) : output_(output) {}

  absl::string_view name() const override { return "constant"; }
  absl::StatusOr<CountDistribution> OutputDistribution(
      const InputProfile& x, double mass_tol) const override;
  absl::StatusOr<double> ExpectedPayment(const InputProfile& x,
                                         size_t i) const override;
  absl::StatusOr<Outcome> Sample(const InputProfile& x,
                                 uint64_t seed) const override;
  std::vector<PlayerType> CandidateTypes(const InputProfile& x,
                                         size_t i) const override;
  nlohmann::ordered_json ParamsJson() const override;

 private:
  int64_t output_;
};

// Builds a mechanism from its config key and parameter object. Field errors
// name the offending key.
absl::StatusOr<std::unique_ptr<Mechanism>> MakeMechanism(
    absl::string_view name, const nlohmann::ordered_json& params);

}  // namespace monopriv

#endif  // MONOPRIV_MECHANISMS_H_
