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

#ifndef MONOPRIV_MECHANISM_H_
#define MONOPRIV_MECHANISM_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "monopriv/count_distribution.h"
#include "monopriv/interval.h"
#include "monopriv/player.h"
#include "nlohmann/json.hpp"

namespace monopriv {

// A mechanism M = (M_out, M_pay) exposed through its exact count law, its
// expected payments, and a seeded sampler. Implementations are immutable and
// safe to share across threads.
//
// OutputDistribution must be faithful: two profiles get equal
// CountDistribution objects only if their true count laws are equal.
class Mechanism {
 public:
  virtual ~Mechanism() = default;

  // Config key, e.g. "alg1".
  virtual absl::string_view name() const = 0;

  // Fixed player count, or nullopt when any n >= 1 is accepted.
  virtual std::optional<size_t> player_count() const { return std::nullopt; }

  virtual absl::StatusOr<CountDistribution> OutputDistribution(
      const InputProfile& x, double mass_tol) const = 0;

  // Pay_i(x): expected payment to player i (0-based).
  virtual absl::StatusOr<double> ExpectedPayment(const InputProfile& x,
                                                 size_t i) const = 0;

  // One draw of (count, payments); deterministic in the seed.
  virtual absl::StatusOr<Outcome> Sample(const InputProfile& x,
                                         uint64_t seed) const = 0;

  // Finite set of replacement types for player i that reaches every
  // output-law class any admissible neighbor can reach, under both the
  // general and the monotonic relation. Sups over neighbors range over it.
  virtual std::vector<PlayerType> CandidateTypes(const InputProfile& x,
                                                 size_t i) const = 0;

  // True when payments to players j != i never depend on player i's type, so
  // M_{-i} is determined by the count law.
  virtual bool OthersPaymentsIgnorePlayer() const { return true; }

  // Privacy parameter of the count noise, if any.
  virtual std::optional<double> epsilon() const { return std::nullopt; }

  // Valuation threshold separating included from excluded players, if any.
  virtual std::optional<double> valuation_threshold() const {
    return std::nullopt;
  }

  virtual nlohmann::ordered_json ParamsJson() const = 0;

  // Fails unless x matches player_count().
  absl::Status ValidateProfile(const InputProfile& x) const;
  absl::Status ValidatePlayer(const InputProfile& x, size_t i) const;

  // Declarations covering every class of player i's reports: the valuations
  // of CandidateTypes() plus the true valuation, deduplicated and sorted.
  std::vector<double> CanonicalDeclarations(const InputProfile& x,
                                            size_t i) const;
};

// Statistical distance between two output laws of one faithful mechanism:
// exactly 0 for equal objects, StatisticalDistance otherwise.
Interval OutputLawDistance(const CountDistribution& a,
                           const CountDistribution& b);

struct NeighborDistance {
  PlayerType type;
  Interval distance;
};

// Certified statistical distance between M_out(x) and M_out(x') for every
// admissible i-neighbor x' drawn from the mechanism's candidate set.
absl::StatusOr<std::vector<NeighborDistance>> NeighborOutputDistances(
    const Mechanism& m, const InputProfile& x, size_t i,
    NeighborRelation relation, double mass_tol);

}  // namespace monopriv

#endif  // MONOPRIV_MECHANISM_H_
