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

// Privacy-loss function families. A loss model yields, for player i with
// true types x who declares v', an enclosure of
//
//   Loss_i(b, v, v') =
//       E_{(s, p) <- M(b, (v_{-i}, v'))} lambda_i(b, v, v', s, p_{-i})
//
// Player i's own payment never enters lambda_i. Losses scale with the signed
// valuation, so negative valuations give negative losses.

#ifndef MONOPRIV_LOSS_MODEL_H_
#define MONOPRIV_LOSS_MODEL_H_

#include <cstdint>
#include <memory>
#include <optional>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "monopriv/interval.h"
#include "monopriv/mechanism.h"
#include "monopriv/player.h"
#include "nlohmann/json.hpp"

namespace monopriv {

enum class LossKind {
  kZero,
  kDpBoundedGeneral,
  kDpBoundedMonotonic,
  kGrowingSdMonotonic,
  kIncreasingWithThreshold,
};

absl::string_view LossKindName(LossKind kind);

struct LossProperties {
  bool respects_indifference = false;
  bool respects_identical_output_dists = false;
  bool bounded_by_dp = false;
  bool bounded_by_dp_monotonic = false;
  bool growing_with_sd = false;
  bool increasing_for_delta = false;
};

// T_i(l, b, v_{-i}) = slope * l + offset. offset >= slope keeps the induced
// loss at zero for indifferent players.
struct AffineThreshold {
  double slope = 1;
  double offset = 1;

  absl::Status Validate() const;
  double operator()(double ell) const { return slope * ell + offset; }
};

class LossModel {
 public:
  virtual ~LossModel() = default;

  virtual LossKind kind() const = 0;
  virtual LossProperties properties() const = 0;

  // Certified enclosure of Loss_i(b, v, declared) for 0-based player i.
  virtual absl::StatusOr<Interval> Expectation(const Mechanism& m,
                                               const InputProfile& x, size_t i,
                                               double declared,
                                               double mass_tol) const = 0;

  // T_i(l, b, v_{-i}) for models increasing for distinguishability.
  virtual std::optional<double> Threshold(double /*ell*/,
                                          const InputProfile& /*x*/,
                                          size_t /*i*/) const {
    return std::nullopt;
  }

  virtual nlohmann::ordered_json ParamsJson() const {
    return nlohmann::ordered_json::object();
  }
};

std::unique_ptr<LossModel> MakeZeroLoss();

// lambda_i(s) = v_i * max over admissible neighbor types c of
//   ln(Pr[M_{-i}(b, v) = s] / Pr[M_{-i}(b_{-i} c) = s]),
// the extremal member of the family bounded by differential privacy
// (restricted to monotonic neighbors for kMonotonic). Requires mechanisms
// whose payments to others ignore player i.
std::unique_ptr<LossModel> MakeTightDpLoss(NeighborRelation relation);

// Per-outcome value of the tight model at count s. nullopt when s lies in an
// unstored tail of one of the laws involved; +-infinity on support mismatch.
absl::StatusOr<std::optional<double>> TightDpLossAt(const Mechanism& m,
                                                    NeighborRelation relation,
                                                    const InputProfile& x,
                                                    size_t i, int64_t s,
                                                    double mass_tol);

// Synthetic audit model: Loss = 0 when the declared input is not
// delta-distinguishable for i (w.r.t. M_out and `relation`); otherwise
// Loss = max(0, (v_i - offset) / slope + 1), which exceeds l whenever
// v_i >= T_i(l). With the default T_i(l) = l + 1 this is Loss = v_i.
absl::StatusOr<std::unique_ptr<LossModel>> MakeIncreasingThresholdLoss(
    double delta, NeighborRelation relation,
    AffineThreshold threshold = AffineThreshold{});

// Lower-bound functional for the growing-with-statistical-distance family:
// Loss = v_i * max over monotonic neighbor types c of
//   Delta(M_out(b, (v_{-i}, v')), M_out(b_{-i} c)).
std::unique_ptr<LossModel> MakeGrowingSdLoss();

// growing_sd_loss(M)(b, v, v_i) evaluated at the true declaration.
absl::StatusOr<Interval> GrowingSdLoss(const Mechanism& m,
                                       const InputProfile& x, size_t i,
                                       double mass_tol);

// Builds a model from its config key ("zero", "dp_bounded_general",
// "dp_bounded_monotonic", "growing_sd_monotonic",
// "increasing_with_threshold") and parameter object.
absl::StatusOr<std::unique_ptr<LossModel>> MakeLossModel(
    absl::string_view name, const nlohmann::ordered_json& params);

}  // namespace monopriv

#endif  // MONOPRIV_LOSS_MODEL_H_
