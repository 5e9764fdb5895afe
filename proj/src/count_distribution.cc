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

#include "monopriv/count_distribution.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "nlohmann/json.hpp"

namespace monopriv {

absl::StatusOr<CountDistribution> CountDistribution::Create(
    int64_t min_count, std::vector<double> probs, double truncation_mass) {
  if (probs.empty()) {
    return absl::InvalidArgumentError("distribution window is empty");
  }
  if (!std::isfinite(truncation_mass) || truncation_mass < 0) {
    return absl::InvalidArgumentError(
        "truncation mass must be finite and non-negative");
  }
  double total = truncation_mass;
  for (double p : probs) {
    if (!std::isfinite(p) || p < 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("atom probability must be in [0, 1], got ", p));
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kMassTolerance) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "atoms plus truncation mass sum to %.17g, not 1", total));
  }
  return CountDistribution(min_count, std::move(probs), truncation_mass);
}

CountDistribution CountDistribution::PointMass(int64_t count) {
  return CountDistribution(count, {1.0}, 0.0);
}

double CountDistribution::StoredMass() const {
  double total = 0;
  for (double p : probs_) total += p;
  return total;
}

CountDistribution CountDistribution::Shifted(int64_t shift) const {
  return CountDistribution(min_count_ + shift, probs_, truncation_mass_);
}

nlohmann::ordered_json DistributionToJson(const CountDistribution& d) {
  nlohmann::ordered_json atoms = nlohmann::ordered_json::object();
  for (int64_t k = d.min_count(); k <= d.max_count(); ++k) {
    const double p = d.StoredProbability(k);
    if (p > 0) atoms[std::to_string(k)] = p;
  }
  nlohmann::ordered_json j;
  j["atoms"] = std::move(atoms);
  j["truncation_mass"] = d.truncation_mass();
  return j;
}

absl::StatusOr<CountDistribution> DistributionFromJson(
    const nlohmann::ordered_json& j) {
  if (!j.is_object() || !j.contains("atoms") || !j["atoms"].is_object()) {
    return absl::InvalidArgumentError(
        "distribution must be an object with an \"atoms\" object");
  }
  double truncation = 0;
  if (j.contains("truncation_mass")) {
    if (!j["truncation_mass"].is_number()) {
      return absl::InvalidArgumentError("truncation_mass must be a number");
    }
    truncation = j["truncation_mass"].get<double>();
  }
  std::map<int64_t, double> atoms;
  for (const auto& [key, value] : j["atoms"].items()) {
    int64_t k = 0;
    const char* end = key.data() + key.size();
    auto [ptr, ec] = std::from_chars(key.data(), end, k);
    if (ec != std::errc() || ptr != end) {
      return absl::InvalidArgumentError(
          absl::StrCat("atom key \"", key, "\" is not an integer"));
    }
    if (!value.is_number()) {
      return absl::InvalidArgumentError(
          absl::StrCat("atom ", key, " must map to a number"));
    }
    atoms[k] = value.get<double>();
  }
  if (atoms.empty()) {
    return absl::InvalidArgumentError("distribution has no atoms");
  }
  const int64_t lo = atoms.begin()->first;
  const int64_t hi = atoms.rbegin()->first;
  if (hi - lo > (int64_t{1} << 24)) {
    return absl::InvalidArgumentError("distribution window too wide");
  }
  std::vector<double> probs(static_cast<size_t>(hi - lo + 1), 0.0);
  for (const auto& [k, p] : atoms) probs[static_cast<size_t>(k - lo)] = p;
  return CountDistribution::Create(lo, std::move(probs), truncation);
}

Interval StatisticalDistance(const CountDistribution& d1,
                             const CountDistribution& d2) {
  const int64_t lo = std::min(d1.min_count(), d2.min_count());
  const int64_t hi = std::max(d1.max_count(), d2.max_count());
  double l1 = 0;
  for (int64_t k = lo; k <= hi; ++k) {
    l1 += std::abs(d1.StoredProbability(k) - d2.StoredProbability(k));
  }
  const double half = 0.5 * l1;
  const double slack = 0.5 * (d1.truncation_mass() + d2.truncation_mass());
  return {std::clamp(half - slack, 0.0, 1.0),
          std::clamp(half + slack, 0.0, 1.0)};
}

absl::StatusOr<double> DpLevel(const CountDistribution& d1,
                               const CountDistribution& d2) {
  if (d1.truncation_mass() > kDpLevelMaxTruncation ||
      d2.truncation_mass() > kDpLevelMaxTruncation) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "dp level needs truncation mass <= %g, got %g and %g",
        kDpLevelMaxTruncation, d1.truncation_mass(), d2.truncation_mass()));
  }
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const int64_t lo = std::min(d1.min_count(), d2.min_count());
  const int64_t hi = std::max(d1.max_count(), d2.max_count());
  double level = 0;
  for (int64_t k = lo; k <= hi; ++k) {
    const std::optional<double> p1 = d1.KnownProbability(k);
    const std::optional<double> p2 = d2.KnownProbability(k);
    if (p1.has_value() && p2.has_value()) {
      if (*p1 == 0 && *p2 == 0) continue;
      if (*p1 == 0 || *p2 == 0) return kInf;
      level = std::max(level, std::abs(std::log(*p1) - std::log(*p2)));
      continue;
    }
    // One side sits in the other's unstored tail.
    const double known = p1.has_value() ? *p1 : *p2;
    if (known > kDpLevelMaxTruncation) return kInf;
  }
  return level;
}

}  // namespace monopriv
