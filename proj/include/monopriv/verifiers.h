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

// Checkers for individual rationality, truthfulness, accuracy, DP level and
// distinguishability. Every comparison is made on certified intervals: a
// verdict is pass or fail only when the whole interval lies on one side.

#ifndef MONOPRIV_VERIFIERS_H_
#define MONOPRIV_VERIFIERS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "monopriv/interval.h"
#include "monopriv/loss_model.h"
#include "monopriv/mechanism.h"
#include "monopriv/player.h"

namespace monopriv {

enum class Verdict { kPass, kFail, kInconclusive };

absl::string_view VerdictName(Verdict verdict);

// Fail dominates inconclusive, which dominates pass.
Verdict CombineVerdicts(Verdict a, Verdict b);

// Common shape of every per-player check. `margin` is signed so that
// positive means slack in favour of the property.
struct CheckResult {
  Verdict verdict = Verdict::kPass;
  double margin = 0;
  std::string witness;
};

// --- Individual rationality -------------------------------------------------

struct IrResult : CheckResult {
  double payment = 0;
  Interval loss;
};

// Pay_i(x) >= Loss_i(x, v_i). margin = payment - loss.hi.
absl::StatusOr<IrResult> CheckIr(const Mechanism& m, const LossModel& model,
                                 const InputProfile& x, size_t i,
                                 double mass_tol);

// --- Truthfulness -----------------------------------------------------------

struct TruthfulResult : CheckResult {
  // Enclosure of the largest utility gain over the deviations and the
  // declaration that attains it.
  Interval best_gain;
  std::optional<double> best_deviation;
};

// Deviation grid: the mechanism's canonical declarations plus `extras`.
std::vector<double> DefaultDeviations(const Mechanism& m,
                                      const InputProfile& x, size_t i,
                                      std::span<const double> extras = {});

// For every v' in `deviations`:
//   Pay_i(x) - Loss_i(x, v_i) >= Pay_i(x_{i <- v'}) - Loss_i(x, v').
// margin = -best_gain.hi.
absl::StatusOr<TruthfulResult> CheckTruthful(const Mechanism& m,
                                             const LossModel& model,
                                             const InputProfile& x, size_t i,
                                             std::span<const double> deviations,
                                             double mass_tol);

// --- Accuracy ---------------------------------------------------------------

struct AccuracySpec {
  double alpha = 0;
  double alpha_prime = 0;
  double beta = 0;

  absl::Status Validate() const;
};

// ([eta + gamma, gamma], 2 exp(-epsilon gamma n)) where eta is the fraction
// of players with bit 1 above the mechanism's valuation threshold and
// gamma = gamma_n / n. Needs epsilon() and valuation_threshold().
absl::StatusOr<AccuracySpec> ThresholdAccuracySpec(const Mechanism& m,
                                                   const InputProfile& x,
                                                   double gamma_n);

struct AccuracyResult : CheckResult {
  // Enclosure of Pr[count outside ((b - alpha) n, (b + alpha') n)].
  Interval failure_probability;
};

// Exact: sums stored atoms outside the window and adds truncation mass to
// the upper bound. Window ends within 1e-9 of an integer snap to it.
absl::StatusOr<AccuracyResult> CheckAccuracyExact(const Mechanism& m,
                                                  const InputProfile& x,
                                                  const AccuracySpec& spec,
                                                  double mass_tol);

// Monte Carlo with a 99% Wilson interval on the failure rate.
absl::StatusOr<AccuracyResult> CheckAccuracyMonteCarlo(
    const Mechanism& m, const InputProfile& x, const AccuracySpec& spec,
    int64_t trials, uint64_t seed);

// Half-open count bounds of the accuracy window: counts in
// [first_ok, last_ok] are accurate.
struct AccuracyWindow {
  int64_t first_ok = 0;
  int64_t last_ok = -1;
};
AccuracyWindow AccuracyCountWindow(double lower, double upper);

// --- Distinguishability -----------------------------------------------------

struct DistinguishabilityQuery {
  size_t player = 0;
  double delta = 0;
  NeighborRelation relation = NeighborRelation::kGeneral;
};

enum class Distinguishability {
  kDistinguishable,
  kNotDistinguishable,
  kInconclusive,
};

absl::string_view DistinguishabilityName(Distinguishability d);

struct DistinguishabilityResult {
  Distinguishability outcome = Distinguishability::kNotDistinguishable;
  // Neighbor with the largest distance (by lo when distinguishable, by hi
  // otherwise); absent when no admissible neighbor exists.
  std::optional<NeighborDistance> witness;
  // Refined mass_tol that may settle an inconclusive outcome.
  std::optional<double> suggested_mass_tol;
};

absl::StatusOr<DistinguishabilityResult> CheckDistinguishable(
    const Mechanism& m, const InputProfile& x,
    const DistinguishabilityQuery& q, double mass_tol);

// --- Differential privacy ---------------------------------------------------

struct DpResult : CheckResult {
  double level = 0;
};

// Max DpLevel between M_out(x) and M_out of each general i-neighbor, against
// `epsilon` + 1e-9. margin = epsilon - level.
absl::StatusOr<DpResult> CheckDpLevel(const Mechanism& m,
                                      const InputProfile& x, size_t i,
                                      double epsilon, double mass_tol);

}  // namespace monopriv

#endif  // MONOPRIV_VERIFIERS_H_
