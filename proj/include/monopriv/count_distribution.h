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

#ifndef MONOPRIV_COUNT_DISTRIBUTION_H_
#define MONOPRIV_COUNT_DISTRIBUTION_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "absl/status/statusor.h"
#include "monopriv/interval.h"
#include "nlohmann/json_fwd.hpp"

namespace monopriv {

// Tolerance on |sum(atoms) + truncation_mass - 1| accepted by Create().
inline constexpr double kMassTolerance = 1e-12;

// Exact law of a mechanism's published integer count, stored densely over a
// contiguous window [min_count, max_count]. Probability that lies outside the
// window is not stored; truncation_mass is a certified upper bound on it.
// A distribution with truncation_mass == 0 has exact support: counts outside
// the window have probability zero.
class CountDistribution {
 public:
  // `probs[j]` is Pr[count = min_count + j]. Fails if any atom is negative or
  // non-finite, if the window is empty, or if the mass invariant is violated.
  static absl::StatusOr<CountDistribution> Create(int64_t min_count,
                                                  std::vector<double> probs,
                                                  double truncation_mass);

  static CountDistribution PointMass(int64_t count);

  int64_t min_count() const { return min_count_; }
  int64_t max_count() const {
    return min_count_ + static_cast<int64_t>(probs_.size()) - 1;
  }
  const std::vector<double>& probs() const { return probs_; }
  double truncation_mass() const { return truncation_mass_; }

  bool InWindow(int64_t k) const {
    return k >= min_count_ && k <= max_count();
  }

  // Stored probability of k; zero outside the window.
  double StoredProbability(int64_t k) const {
    return InWindow(k) ? probs_[static_cast<size_t>(k - min_count_)] : 0.0;
  }

  // Pr[count = k] when it is known: stored atoms, or zero outside an exact
  // window. nullopt for counts in the unstored tail of a truncated law.
  std::optional<double> KnownProbability(int64_t k) const {
    if (InWindow(k)) return StoredProbability(k);
    if (truncation_mass_ == 0) return 0.0;
    return std::nullopt;
  }

  double StoredMass() const;

  // Same law translated by `shift`.
  CountDistribution Shifted(int64_t shift) const;

  // Enclosure of Pr[count in S] where S is given by a predicate on counts:
  // stored atoms give the lower bound, the truncation mass is added to hi.
  template <typename Pred>
  Interval ProbabilityOf(Pred&& in_set) const {
    double p = 0;
    for (size_t j = 0; j < probs_.size(); ++j) {
      if (in_set(min_count_ + static_cast<int64_t>(j))) p += probs_[j];
    }
    return {p, p + truncation_mass_};
  }

  friend bool operator==(const CountDistribution&,
                         const CountDistribution&) = default;

 private:
  CountDistribution(int64_t min_count, std::vector<double> probs,
                    double truncation_mass)
      : min_count_(min_count),
        probs_(std::move(probs)),
        truncation_mass_(truncation_mass) {}

  int64_t min_count_ = 0;
  std::vector<double> probs_;
  double truncation_mass_ = 0;
};

// {"atoms":{"k":p,...},"truncation_mass":m}. Zero atoms are omitted on
// output; on input the window spans the smallest and largest listed keys.
nlohmann::ordered_json DistributionToJson(const CountDistribution& d);
absl::StatusOr<CountDistribution> DistributionFromJson(
    const nlohmann::ordered_json& j);

// Certified enclosure of the total variation distance. With D the half L1
// distance over the union of stored windows and m1, m2 the truncation masses,
// the true distance lies in [D - (m1+m2)/2, D + (m1+m2)/2]; both ends are
// clamped to [0, 1].
Interval StatisticalDistance(const CountDistribution& d1,
                             const CountDistribution& d2);

// Truncation masses above this are rejected by DpLevel.
inline constexpr double kDpLevelMaxTruncation = 1e-9;

// Pure-DP level between two laws: max over atoms of |ln(p1(k)/p2(k))|.
// Atoms stored in only one law are ignored when their probability is at most
// kDpLevelMaxTruncation and the other law is truncated there; any other
// support mismatch gives +infinity.
absl::StatusOr<double> DpLevel(const CountDistribution& d1,
                               const CountDistribution& d2);

}  // namespace monopriv

#endif  // MONOPRIV_COUNT_DISTRIBUTION_H_
