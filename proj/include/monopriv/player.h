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

// Domain types for the data-purchasing game: player types, input profiles,
// outcomes, and the neighbor relations that privacy definitions range over.

#ifndef MONOPRIV_PLAYER_H_
#define MONOPRIV_PLAYER_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "nlohmann/json_fwd.hpp"

namespace monopriv {

// A single player's private type: an unfalsifiable data bit and a privacy
// valuation in currency units per unit of privacy loss. Valuations may be
// negative but must be finite.
struct PlayerType {
  int bit = 0;
  double valuation = 0;

  friend bool operator==(const PlayerType&, const PlayerType&) = default;
};

absl::Status ValidatePlayerType(const PlayerType& type);

std::string ToString(const PlayerType& type);

// The full game input (b, v). Immutable once constructed through Create().
class InputProfile {
 public:
  static absl::StatusOr<InputProfile> Create(std::vector<PlayerType> players);
  static absl::StatusOr<InputProfile> FromVectors(
      std::span<const int> bits, std::span<const double> valuations);

  size_t size() const { return players_.size(); }
  const PlayerType& operator[](size_t i) const { return players_[i]; }
  std::span<const PlayerType> players() const { return players_; }

  // Sum of the data bits.
  int64_t BitSum() const;

  // Copy of this profile with player i's type replaced. i must be in range;
  // the replacement is not re-validated beyond ValidatePlayerType.
  InputProfile WithPlayer(size_t i, PlayerType type) const;
  InputProfile WithValuation(size_t i, double valuation) const;

  // Indices (0-based) at which this profile and `other` differ.
  std::vector<size_t> DifferingPlayers(const InputProfile& other) const;

  friend bool operator==(const InputProfile&, const InputProfile&) = default;

 private:
  explicit InputProfile(std::vector<PlayerType> players)
      : players_(std::move(players)) {}

  std::vector<PlayerType> players_;
};

// {"bits":[...],"valuations":[...]} in that field order.
nlohmann::ordered_json ProfileToJson(const InputProfile& profile);
absl::StatusOr<InputProfile> ProfileFromJson(const nlohmann::ordered_json& j);
std::string ProfileToString(const InputProfile& profile);

// Published estimate s and the payment vector p.
struct Outcome {
  int64_t count = 0;
  std::vector<double> payments;
};

enum class NeighborRelation { kGeneral, kMonotonic };

absl::string_view RelationName(NeighborRelation relation);
absl::StatusOr<NeighborRelation> ParseRelation(absl::string_view name);

// True iff the two types carry opposite bits and the bit-1 side has the
// weakly larger valuation. Symmetric.
bool MonotonicallyRelated(const PlayerType& a, const PlayerType& c);

// True iff `candidate` may replace `current` as player i's type under the
// relation: it must differ, and for kMonotonic be monotonically related.
bool AdmissibleNeighborType(const PlayerType& current,
                            const PlayerType& candidate,
                            NeighborRelation relation);

// All i-neighbors of x obtained by substituting an admissible candidate type
// at index i (0-based). Duplicate candidates yield duplicate profiles only
// once; order follows the candidate list.
absl::StatusOr<std::vector<InputProfile>> NeighborProfiles(
    const InputProfile& x, size_t i, NeighborRelation relation,
    std::span<const PlayerType> candidate_types);

}  // namespace monopriv

#endif  // MONOPRIV_PLAYER_H_
