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

#include "monopriv/config.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "json_fields.h"

namespace monopriv {
namespace {

using internal::FieldError;
using internal::Json;

constexpr absl::string_view kTopLevelKeys[] = {
    "mechanism", "params",     "loss_model", "loss_params",
    "profiles",  "profiles_file", "checks",  "check_params",
    "seed",      "mass_tol",   "output"};

// 1-based line of byte offset `pos`.
size_t LineOf(absl::string_view text, size_t pos) {
  pos = std::min(pos, text.size());
  return 1 + static_cast<size_t>(
                 std::count(text.begin(), text.begin() + pos, '\n'));
}

// Best-effort line of a dotted field path such as "params.alg1.budget":
// finds each quoted component in turn after the previous one.
std::optional<size_t> LocateField(absl::string_view text,
                                  absl::string_view path) {
  size_t from = 0;
  bool found_any = false;
  for (absl::string_view part : absl::StrSplit(path, '.')) {
    const size_t bracket = part.find('[');
    if (bracket != absl::string_view::npos) part = part.substr(0, bracket);
    if (part.empty()) continue;
    const size_t at = text.find(absl::StrCat("\"", part, "\""), from);
    if (at == absl::string_view::npos) break;
    from = at;
    found_any = true;
  }
  if (!found_any) return std::nullopt;
  return LineOf(text, from);
}

// Prefixes "<source>:<line>: " using the field path named in the message.
absl::Status Diagnose(const absl::Status& s, absl::string_view text,
                      absl::string_view source) {
  if (s.ok()) return s;
  const absl::string_view msg = s.message();
  std::optional<size_t> line;
  const size_t start = msg.find("field '");
  if (start != absl::string_view::npos) {
    const size_t end = msg.find('\'', start + 7);
    if (end != absl::string_view::npos) {
      line = LocateField(text, msg.substr(start + 7, end - start - 7));
    }
  }
  if (line.has_value()) {
    return absl::InvalidArgumentError(
        absl::StrCat(source, ":", *line, ": ", msg));
  }
  return absl::InvalidArgumentError(absl::StrCat(source, ": ", msg));
}

absl::StatusOr<NamedProfile> ReadProfile(const Json& j,
                                         const std::string& field,
                                         size_t ordinal) {
  absl::StatusOr<InputProfile> p = ProfileFromJson(j);
  if (!p.ok()) return FieldError(field, p.status().message());
  std::string id = absl::StrCat("p", ordinal);
  if (j.contains("id")) {
    if (!j["id"].is_string()) {
      return FieldError(field + ".id", "expected a string");
    }
    id = j["id"].get<std::string>();
  }
  for (const auto& [key, unused] : j.items()) {
    if (key != "id" && key != "bits" && key != "valuations") {
      return FieldError(absl::StrCat(field, ".", key), "unknown profile key");
    }
  }
  return NamedProfile{id, *std::move(p)};
}

absl::StatusOr<RunConfig> ParseJson(const Json& root,
                                    absl::string_view base_dir) {
  if (!root.is_object()) {
    return FieldError("(root)", "config must be a JSON object");
  }
  for (const auto& [key, unused] : root.items()) {
    if (std::find(std::begin(kTopLevelKeys), std::end(kTopLevelKeys), key) ==
        std::end(kTopLevelKeys)) {
      return FieldError(key, "unknown top-level key");
    }
  }
  RunConfig c;
  absl::StatusOr<std::string> mech =
      internal::ReadString(root, "mechanism", "");
  if (!mech.ok()) return mech.status();
  c.mechanism = *mech;
  for (const char* key : {"params", "loss_params", "check_params"}) {
    if (root.contains(key) && !root[key].is_object()) {
      return FieldError(key, "expected an object");
    }
  }
  if (root.contains("params")) c.mechanism_params = root["params"];
  absl::StatusOr<std::string> loss =
      internal::ReadString(root, "loss_model", "", c.loss_model);
  if (!loss.ok()) return loss.status();
  c.loss_model = *loss;
  if (root.contains("loss_params")) c.loss_params = root["loss_params"];
  if (root.contains("check_params")) c.check_params = root["check_params"];

  if (root.contains("profiles")) {
    const Json& ps = root["profiles"];
    if (!ps.is_array()) return FieldError("profiles", "expected an array");
    for (size_t k = 0; k < ps.size(); ++k) {
      absl::StatusOr<NamedProfile> p =
          ReadProfile(ps[k], absl::StrCat("profiles[", k, "]"),
                      c.profiles.size() + 1);
      if (!p.ok()) return p.status();
      c.profiles.push_back(*std::move(p));
    }
  }
  if (root.contains("profiles_file")) {
    absl::StatusOr<std::string> rel =
        internal::ReadString(root, "profiles_file", "");
    if (!rel.ok()) return rel.status();
    std::filesystem::path path(*rel);
    if (path.is_relative()) {
      path = std::filesystem::path(std::string(base_dir)) / path;
    }
    std::ifstream in(path);
    if (!in) {
      return FieldError("profiles_file",
                        absl::StrCat("cannot read ", path.string()));
    }
    Json ps;
    try {
      ps = Json::parse(in);
    } catch (const Json::parse_error& e) {
      return FieldError("profiles_file",
                        absl::StrCat(path.string(), ": ", e.what()));
    }
    if (!ps.is_array()) {
      return FieldError("profiles_file", "file must hold a JSON array");
    }
    for (size_t k = 0; k < ps.size(); ++k) {
      absl::StatusOr<NamedProfile> p = ReadProfile(
          ps[k], absl::StrCat("profiles_file[", k, "]"), c.profiles.size() + 1);
      if (!p.ok()) return p.status();
      c.profiles.push_back(*std::move(p));
    }
  }

  if (root.contains("checks")) {
    const Json& cs = root["checks"];
    if (!cs.is_array()) return FieldError("checks", "expected an array");
    for (size_t k = 0; k < cs.size(); ++k) {
      const std::string field = absl::StrCat("checks[", k, "]");
      if (!cs[k].is_string()) return FieldError(field, "expected a string");
      const std::string name = cs[k].get<std::string>();
      if (std::find(std::begin(kCheckNames), std::end(kCheckNames), name) ==
          std::end(kCheckNames)) {
        return FieldError(field, absl::StrCat("unknown check \"", name, "\""));
      }
      c.checks.push_back(name);
    }
  }

  if (root.contains("seed")) {
    const Json& s = root["seed"];
    if (s.is_number_unsigned()) {
      c.seed = s.get<uint64_t>();
    } else {
      return FieldError("seed", "expected a non-negative 64-bit integer");
    }
  }
  absl::StatusOr<double> tol =
      internal::ReadNumber(root, "mass_tol", "", c.mass_tol);
  if (!tol.ok()) return tol.status();
  if (!(*tol > 0 && *tol < 1)) {
    return FieldError("mass_tol", "must be in (0, 1)");
  }
  c.mass_tol = *tol;

  if (root.contains("output")) {
    const Json& o = root["output"];
    if (!o.is_object()) return FieldError("output", "expected an object");
    for (const auto& [key, unused] : o.items()) {
      if (key != "csv" && key != "report") {
        return FieldError(absl::StrCat("output.", key), "unknown output key");
      }
    }
    if (o.contains("csv")) {
      absl::StatusOr<std::string> p = internal::ReadString(o, "csv", "output.");
      if (!p.ok()) return p.status();
      c.csv_path = *p;
    }
    if (o.contains("report")) {
      absl::StatusOr<std::string> p =
          internal::ReadString(o, "report", "output.");
      if (!p.ok()) return p.status();
      c.report_path = *p;
    }
  }
  return c;
}

}  // namespace

absl::StatusOr<RunConfig> ParseConfig(absl::string_view text,
                                      absl::string_view source,
                                      absl::string_view base_dir,
                                      const ConfigOverrides& overrides) {
  Json root;
  try {
    root = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    return absl::InvalidArgumentError(
        absl::StrCat(source, ":", LineOf(text, e.byte == 0 ? 0 : e.byte - 1),
                     ": malformed JSON: ", e.what()));
  }
  absl::StatusOr<RunConfig> c = ParseJson(root, base_dir);
  if (!c.ok()) return Diagnose(c.status(), text, source);
  if (overrides.seed.has_value()) c->seed = overrides.seed;
  if (overrides.mass_tol.has_value()) c->mass_tol = *overrides.mass_tol;
  if (overrides.out_prefix.has_value()) {
    c->csv_path = *overrides.out_prefix + ".csv";
    c->report_path = *overrides.out_prefix + ".json";
  }
  if (absl::Status s = ValidateConfig(*c); !s.ok()) {
    return Diagnose(s, text, source);
  }
  return c;
}

absl::StatusOr<RunConfig> LoadConfigFile(const std::string& path,
                                         const ConfigOverrides& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return absl::NotFoundError(absl::StrCat(path, ": cannot read config"));
  }
  std::stringstream buf;
  buf << in.rdbuf();
  const std::filesystem::path parent =
      std::filesystem::path(path).parent_path();
  return ParseConfig(buf.str(), path, parent.empty() ? "." : parent.string(),
                     overrides);
}

nlohmann::ordered_json ConfigToJson(const RunConfig& config) {
  Json j;
  j["mechanism"] = config.mechanism;
  j["params"] = config.mechanism_params;
  j["loss_model"] = config.loss_model;
  j["loss_params"] = config.loss_params;
  Json profiles = Json::array();
  for (const NamedProfile& p : config.profiles) {
    Json e;
    e["id"] = p.id;
    const Json fields = ProfileToJson(p.profile);
    for (const auto& [key, value] : fields.items()) e[key] = value;
    profiles.push_back(std::move(e));
  }
  j["profiles"] = std::move(profiles);
  j["checks"] = config.checks;
  j["check_params"] = config.check_params;
  if (config.seed.has_value()) j["seed"] = *config.seed;
  j["mass_tol"] = config.mass_tol;
  if (config.csv_path.has_value() || config.report_path.has_value()) {
    Json o = Json::object();
    if (config.csv_path.has_value()) o["csv"] = *config.csv_path;
    if (config.report_path.has_value()) o["report"] = *config.report_path;
    j["output"] = std::move(o);
  }
  return j;
}

}  // namespace monopriv
