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

#include "monopriv/mechanism.h"

#include <algorithm>

#include "absl/strings/str_format.h"

namespace monopriv {

absl::Status Mechanism::ValidateProfile(const InputProfile& x) const {
  if (std::optional<size_t> n = player_count(); n && *n != x.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "mechanism %s is configured for %d players, profile has %d", name(),
        *n, x.size()));
  }
  return absl::OkStatus();
}

absl::Status Mechanism::ValidatePlayer(const InputProfile& x, size_t i) const {
  if (absl::Status s = ValidateProfile(x); !s.ok()) return s;
  if (i >= x.size()) {
    return absl::OutOfRangeError(absl::StrFormat(
        "player index %d out of range for %d players", i, x.size()));
  }
  return absl::OkStatus();
}

std::vector<double> Mechanism::CanonicalDeclarations(const InputProfile& x,
                                                     size_t i) const {
  std::vector<double> out;
  if (i >= x.size()) return out;
  out.push_back(x[i].valuation);
  for (const PlayerType& t : CandidateTypes(x, i)) out.push_back(t.valuation);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Interval OutputLawDistance(const CountDistribution& a,
                           const CountDistribution& b) {
  if (a == b) return Interval::Point(0);
  return StatisticalDistance(a, b);
}

absl::StatusOr<std::vector<NeighborDistance>> NeighborOutputDistances(
    const Mechanism& m, const InputProfile& x, size_t i,
    NeighborRelation relation, double mass_tol) {
  if (absl::Status s = m.ValidatePlayer(x, i); !s.ok()) return s;
  absl::StatusOr<CountDistribution> base = m.OutputDistribution(x, mass_tol);
  if (!base.ok()) return base.status();
  const std::vector<PlayerType> candidates = m.CandidateTypes(x, i);
  absl::StatusOr<std::vector<InputProfile>> neighbors =
      NeighborProfiles(x, i, relation, candidates);
  if (!neighbors.ok()) return neighbors.status();
  std::vector<NeighborDistance> out;
  out.reserve(neighbors->size());
  for (const InputProfile& y : *neighbors) {
    absl::StatusOr<CountDistribution> law = m.OutputDistribution(y, mass_tol);
    if (!law.ok()) return law.status();
    out.push_back({y[i], OutputLawDistance(*base, *law)});
  }
  return out;
}

}  // namespace monopriv
