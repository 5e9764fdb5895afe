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

// Run configuration. A config is one JSON object:
//
//   {
//     "mechanism": "alg1",
//     "params": {"alg1": {"budget": 8, "epsilon": 0.5, "n": 4}},
//     "loss_model": "dp_bounded_monotonic",
//     "loss_params": {},
//     "profiles": [{"id": "a", "bits": [...], "valuations": [...]}],
//     "profiles_file": "more.json",
//     "checks": ["ir", "truthful", "accuracy"],
//     "check_params": {"truthful": {"players": "below_threshold"}},
//     "seed": 7,
//     "mass_tol": 1e-12,
//     "output": {"csv": "out.csv", "report": "out.json"}
//   }
//
// Only "mechanism" and its params are required. A profiles file holds a
// JSON array of profiles, resolved relative to the config file.

#ifndef MONOPRIV_CONFIG_H_
#define MONOPRIV_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "monopriv/player.h"
#include "nlohmann/json.hpp"

namespace monopriv {

inline constexpr absl::string_view kCheckNames[] = {
    "ir",  "truthful",     "accuracy",        "dp",
    "distinguishability", "audit_general", "audit_monotonic",
    "audit_tradeoff"};

struct NamedProfile {
  std::string id;
  InputProfile profile;
};

struct RunConfig {
  std::string mechanism;
  nlohmann::ordered_json mechanism_params = nlohmann::ordered_json::object();
  std::string loss_model = "dp_bounded_monotonic";
  nlohmann::ordered_json loss_params = nlohmann::ordered_json::object();
  std::vector<NamedProfile> profiles;
  std::vector<std::string> checks;
  nlohmann::ordered_json check_params = nlohmann::ordered_json::object();
  std::optional<uint64_t> seed;
  double mass_tol = 1e-12;
  std::optional<std::string> csv_path;
  std::optional<std::string> report_path;
};

// Command-line overrides, applied after parsing and before validation.
struct ConfigOverrides {
  std::optional<uint64_t> seed;
  std::optional<double> mass_tol;
  // Writes <prefix>.csv and <prefix>.json.
  std::optional<std::string> out_prefix;
};

// Parses and validates config text. `base_dir` resolves profiles_file.
// Errors read "<source>:<line>: <message>" when a line can be located.
absl::StatusOr<RunConfig> ParseConfig(absl::string_view text,
                                      absl::string_view source = "config",
                                      absl::string_view base_dir = ".",
                                      const ConfigOverrides& overrides = {});

absl::StatusOr<RunConfig> LoadConfigFile(
    const std::string& path, const ConfigOverrides& overrides = {});

// Canonical JSON form with profiles inlined. Parsing it yields an
// equivalent config.
nlohmann::ordered_json ConfigToJson(const RunConfig& config);

// Structural validation shared by ParseConfig and programmatic callers:
// builds the mechanism and loss model, checks profile sizes, check names
// and per-check parameters.
absl::Status ValidateConfig(const RunConfig& config);

}  // namespace monopriv

#endif  // MONOPRIV_CONFIG_H_
