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

#include "monopriv/player.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "nlohmann/json.hpp"

namespace monopriv {

absl::Status ValidatePlayerType(const PlayerType& type) {
  if (type.bit != 0 && type.bit != 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("data bit must be 0 or 1, got ", type.bit));
  }
  if (!std::isfinite(type.valuation)) {
    return absl::InvalidArgumentError("valuation must be finite");
  }
  return absl::OkStatus();
}

std::string ToString(const PlayerType& type) {
  return absl::StrFormat("(%d, %.17g)", type.bit, type.valuation);
}

absl::StatusOr<InputProfile> InputProfile::Create(
    std::vector<PlayerType> players) {
  if (players.empty()) {
    return absl::InvalidArgumentError("profile needs at least one player");
  }
  for (size_t i = 0; i < players.size(); ++i) {
    if (absl::Status s = ValidatePlayerType(players[i]); !s.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("player ", i + 1, ": ", s.message()));
    }
  }
  return InputProfile(std::move(players));
}

absl::StatusOr<InputProfile> InputProfile::FromVectors(
    std::span<const int> bits, std::span<const double> valuations) {
  if (bits.size() != valuations.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "bits has %d entries but valuations has %d", bits.size(),
        valuations.size()));
  }
  std::vector<PlayerType> players;
  players.reserve(bits.size());
  for (size_t i = 0; i < bits.size(); ++i) {
    players.push_back({bits[i], valuations[i]});
  }
  return Create(std::move(players));
}

int64_t InputProfile::BitSum() const {
  int64_t sum = 0;
  for (const PlayerType& p : players_) sum += p.bit;
  return sum;
}

InputProfile InputProfile::WithPlayer(size_t i, PlayerType type) const {
  std::vector<PlayerType> players = players_;
  players.at(i) = type;
  return InputProfile(std::move(players));
}

InputProfile InputProfile::WithValuation(size_t i, double valuation) const {
  return WithPlayer(i, {players_.at(i).bit, valuation});
}

std::vector<size_t> InputProfile::DifferingPlayers(
    const InputProfile& other) const {
  std::vector<size_t> out;
  const size_t n = std::max(size(), other.size());
  for (size_t i = 0; i < n; ++i) {
    if (i >= size() || i >= other.size() || players_[i] != other.players_[i]) {
      out.push_back(i);
    }
  }
  return out;
}

nlohmann::ordered_json ProfileToJson(const InputProfile& profile) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json bits = nlohmann::ordered_json::array();
  nlohmann::ordered_json valuations = nlohmann::ordered_json::array();
  for (const PlayerType& p : profile.players()) {
    bits.push_back(p.bit);
    valuations.push_back(p.valuation);
  }
  j["bits"] = std::move(bits);
  j["valuations"] = std::move(valuations);
  return j;
}

absl::StatusOr<InputProfile> ProfileFromJson(const nlohmann::ordered_json& j) {
  if (!j.is_object() || !j.contains("bits") || !j.contains("valuations")) {
    return absl::InvalidArgumentError(
        "profile must be an object with \"bits\" and \"valuations\"");
  }
  const auto& bits = j["bits"];
  const auto& valuations = j["valuations"];
  if (!bits.is_array() || !valuations.is_array()) {
    return absl::InvalidArgumentError(
        "profile \"bits\" and \"valuations\" must be arrays");
  }
  std::vector<int> b;
  std::vector<double> v;
  for (const auto& e : bits) {
    if (!e.is_number_integer()) {
      return absl::InvalidArgumentError("profile bits must be integers 0/1");
    }
    b.push_back(e.get<int>());
  }
  for (const auto& e : valuations) {
    if (!e.is_number()) {
      return absl::InvalidArgumentError("profile valuations must be numbers");
    }
    v.push_back(e.get<double>());
  }
  return InputProfile::FromVectors(b, v);
}

std::string ProfileToString(const InputProfile& profile) {
  return absl::StrJoin(profile.players(), " ",
                       [](std::string* out, const PlayerType& p) {
                         absl::StrAppend(out, ToString(p));
                       });
}

absl::string_view RelationName(NeighborRelation relation) {
  switch (relation) {
    case NeighborRelation::kGeneral:
      return "general";
    case NeighborRelation::kMonotonic:
      return "monotonic";
  }
  return "unknown";
}

absl::StatusOr<NeighborRelation> ParseRelation(absl::string_view name) {
  if (name == "general") return NeighborRelation::kGeneral;
  if (name == "monotonic") return NeighborRelation::kMonotonic;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown neighbor relation \"", name,
                   "\" (expected general or monotonic)"));
}

bool MonotonicallyRelated(const PlayerType& a, const PlayerType& c) {
  return (a.bit == 0 && c.bit == 1 && a.valuation <= c.valuation) ||
         (a.bit == 1 && c.bit == 0 && a.valuation >= c.valuation);
}

bool AdmissibleNeighborType(const PlayerType& current,
                            const PlayerType& candidate,
                            NeighborRelation relation) {
  if (candidate == current) return false;
  if (relation == NeighborRelation::kMonotonic) {
    return MonotonicallyRelated(current, candidate);
  }
  return true;
}

absl::StatusOr<std::vector<InputProfile>> NeighborProfiles(
    const InputProfile& x, size_t i, NeighborRelation relation,
    std::span<const PlayerType> candidate_types) {
  if (i >= x.size()) {
    return absl::OutOfRangeError(absl::StrFormat(
        "player index %d out of range for %d players", i, x.size()));
  }
  std::vector<PlayerType> seen;
  std::vector<InputProfile> out;
  for (const PlayerType& c : candidate_types) {
    if (absl::Status s = ValidatePlayerType(c); !s.ok()) return s;
    if (!AdmissibleNeighborType(x[i], c, relation)) continue;
    if (std::find(seen.begin(), seen.end(), c) != seen.end()) continue;
    seen.push_back(c);
    out.push_back(x.WithPlayer(i, c));
  }
  return out;
}

}  // namespace monopriv
