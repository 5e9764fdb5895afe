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

// Executes a RunConfig. Checks run in declared order; within a check,
// profiles are evaluated concurrently and their rows gathered by profile
// index, so output does not depend on scheduling.
//
// Per-check parameters (all optional unless noted):
//
//   ir, truthful, dp   players: "all" | "below_threshold" |
//                               "below_threshold_or_bit0"
//   truthful           extra_deviations: [numbers]
//   accuracy           mode: "exact" | "monte_carlo", trials (default 10000),
//                      gamma_n: number or [numbers]  (threshold spec), or
//                      specs: [{alpha, alpha_prime, beta}], or a single
//                      alpha / alpha_prime / beta
//   dp                 epsilon (defaults to the mechanism's)
//   distinguishability delta (required), relation, players,
//                      expect: "distinguishable" | "not_distinguishable"
//   audit_general,     n (defaults to the mechanism's), delta,
//   audit_monotonic    loss_model / loss_params (override the run's model),
//                      expect: a premise name, "impossibility_respected"
//                      or "none"
//   audit_tradeoff     as above plus tau, gamma, eta, beta (required) and
//                      max_pay

#ifndef MONOPRIV_RUNNER_H_
#define MONOPRIV_RUNNER_H_

#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "monopriv/config.h"
#include "monopriv/report.h"

namespace monopriv {

struct RunResult {
  Report report;
  // Human-readable audit tables, one per audit row.
  std::vector<std::string> audit_tables;
};

absl::StatusOr<RunResult> Run(const RunConfig& config);

// Writes the CSV and JSON reports named in the config, if any.
absl::Status WriteOutputs(const RunConfig& config, const Report& report);

// Canned instantiations: thm_mon, thm_imp, thm_monimp, tradeoff, subsample.
std::vector<std::string> DemoNames();
absl::StatusOr<std::vector<RunConfig>> DemoConfigs(absl::string_view name);

// Per-check verdict counts followed by non-passing rows and audit tables.
std::string RenderSummary(const RunConfig& config, const RunResult& result);

struct DistQuery {
  double epsilon = 0;
  int64_t shift1 = 0;
  int64_t shift2 = 1;
  double mass_tol = 1e-12;
};

// Statistical distance and DP level between two shifted geometric laws.
absl::StatusOr<std::string> DistCalculator(const DistQuery& q);

}  // namespace monopriv

#endif  // MONOPRIV_RUNNER_H_
