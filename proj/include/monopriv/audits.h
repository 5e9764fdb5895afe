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

// Executable hybrid-argument audits. Each audit builds the chain of inputs
// used by one of the impossibility results, evaluates every premise of that
// result on exact laws, and reports which premise the mechanism gives up.
//
//   general    2n+1 inputs from (0^n, 0^n) to (1^n, 0^n); a player's
//              valuation is raised to L while its bit turns on.
//   monotonic  adaptive chain with per-player payments P_i and
//              valuations L_i = T_i(P_i).
//   tradeoff   h players at valuation L, then 2 gamma n players at tau,
//              tested against the ([eta + gamma, gamma], beta) windows.

#ifndef MONOPRIV_AUDITS_H_
#define MONOPRIV_AUDITS_H_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "monopriv/interval.h"
#include "monopriv/loss_model.h"
#include "monopriv/mechanism.h"
#include "monopriv/player.h"
#include "monopriv/verifiers.h"
#include "nlohmann/json.hpp"

namespace monopriv {

struct HybridChain {
  std::vector<InputProfile> inputs;
  // Display names, e.g. "x(2,0)".
  std::vector<std::string> labels;
  // Per-step payment bound (P or P_i) and valuation (L or L_i).
  std::vector<double> payments;
  std::vector<double> thresholds;
  // Distance between consecutive output laws, and first to last.
  std::vector<Interval> step_distances;
  Interval end_to_end;

  // Consecutive inputs differ in exactly one player, and the end-to-end
  // distance respects the triangle inequality over the steps.
  absl::Status Validate() const;
};

// Premises in the order they are reported.
enum class Premise { kPayments, kTruthfulIndifferent, kIr, kAccuracy };

absl::string_view PremiseName(Premise p);
absl::StatusOr<Premise> ParsePremise(absl::string_view name);

struct PremiseCheck {
  Premise premise = Premise::kPayments;
  std::string hybrid;
  // 1-based; 0 when the check concerns the whole input.
  size_t player = 0;
  Verdict verdict = Verdict::kPass;
  double margin = 0;
  std::string detail;
};

enum class AuditConclusion {
  // Some premise other than accuracy fails.
  kPremiseViolated,
  // All other premises hold and accuracy fails, as the result predicts.
  kImpossibilityRespected,
  // Every premise including accuracy holds: a counterexample.
  kTheoremContradicted,
  kInconclusive,
};

absl::string_view ConclusionName(AuditConclusion c);

struct AuditReport {
  std::string audit;
  std::string mechanism;
  std::string loss_model;
  double delta = 0;
  HybridChain chain;
  std::vector<PremiseCheck> checks;
  // Index into `checks` of the first failing premise in premise order.
  std::optional<size_t> first_failure;
  AuditConclusion conclusion = AuditConclusion::kInconclusive;
  // Tradeoff audit only: failure probability of the last hybrid against its
  // own window, and the beta bound below which that failure is certified.
  std::optional<Interval> final_failure;
  std::optional<double> certified_beta_sup;
  std::vector<std::string> notes;

  // Pass unless the theorem is contradicted; inconclusive when undecided.
  Verdict verdict() const;
  std::optional<Premise> failed_premise() const;
};

nlohmann::ordered_json AuditToJson(const AuditReport& report);

// Plain-text table of the chain and premise checks.
std::string RenderAudit(const AuditReport& report);

struct GeneralAuditOptions {
  // Defaults to 1/(6n).
  std::optional<double> delta;
  double mass_tol = 1e-12;
};

// Needs a model that respects indifference and has a threshold function.
absl::StatusOr<AuditReport> AuditGeneralImpossibility(
    const Mechanism& m, const LossModel& model, size_t n,
    const GeneralAuditOptions& options = {});

struct MonotonicAuditOptions {
  // Defaults to 1/(3n).
  std::optional<double> delta;
  double mass_tol = 1e-12;
};

absl::StatusOr<AuditReport> AuditMonotonicImpossibility(
    const Mechanism& m, const LossModel& model, size_t n,
    const MonotonicAuditOptions& options = {});

struct TradeoffParams {
  double tau = 0;
  double gamma = 0;
  double eta = 0;
  double beta = 0;
  // Largest payment to a zero-valuation player; computed when absent.
  std::optional<double> max_pay;

  // Checks eta + 2 gamma <= 1, integrality of eta n and 2 gamma n, and
  // beta < 1/2 - (P / tau) gamma n for the given P.
  absl::Status Validate(size_t n, double max_pay) const;
};

// Needs a model that grows with statistical distance.
absl::StatusOr<AuditReport> AuditPaymentAccuracyTradeoff(
    const Mechanism& m, const LossModel& model, size_t n,
    const TradeoffParams& params, double mass_tol = 1e-12);

// max over players i and bit vectors b of Pay_i(b, 0^n). Enumerates all
// 2^n vectors for n <= 16, else only the prefix vectors 1^j 0^(n-j).
absl::StatusOr<double> MaxZeroValuationPayment(const Mechanism& m, size_t n);

}  // namespace monopriv

#endif  // MONOPRIV_AUDITS_H_
