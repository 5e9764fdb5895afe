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

// Typed field readers for config objects. Errors carry the field name.

#ifndef MONOPRIV_SRC_JSON_FIELDS_H_
#define MONOPRIV_SRC_JSON_FIELDS_H_

#include <cstdint>
#include <optional>
#include <string>

#include "absl/status/statusor.h"
#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "nlohmann/json.hpp"

namespace monopriv::internal {

using Json = nlohmann::ordered_json;

inline absl::Status FieldError(absl::string_view field,
                               absl::string_view what) {
  return absl::InvalidArgumentError(
      absl::StrCat("field '", field, "': ", what));
}

inline absl::StatusOr<double> ReadNumber(const Json& obj,
                                         absl::string_view key,
                                         absl::string_view path,
                                         std::optional<double> fallback = {}) {
  const std::string k(key);
  if (!obj.is_object() || !obj.contains(k)) {
    if (fallback) return *fallback;
    return FieldError(absl::StrCat(path, key), "required number is missing");
  }
  if (!obj[k].is_number()) {
    return FieldError(absl::StrCat(path, key), "expected a number");
  }
  return obj[k].get<double>();
}

inline absl::StatusOr<int64_t> ReadInteger(
    const Json& obj, absl::string_view key, absl::string_view path,
    std::optional<int64_t> fallback = {}) {
  const std::string k(key);
  if (!obj.is_object() || !obj.contains(k)) {
    if (fallback) return *fallback;
    return FieldError(absl::StrCat(path, key), "required integer is missing");
  }
  if (!obj[k].is_number_integer()) {
    return FieldError(absl::StrCat(path, key), "expected an integer");
  }
  return obj[k].get<int64_t>();
}

inline absl::StatusOr<std::string> ReadString(
    const Json& obj, absl::string_view key, absl::string_view path,
    std::optional<std::string> fallback = {}) {
  const std::string k(key);
  if (!obj.is_object() || !obj.contains(k)) {
    if (fallback) return *fallback;
    return FieldError(absl::StrCat(path, key), "required string is missing");
  }
  if (!obj[k].is_string()) {
    return FieldError(absl::StrCat(path, key), "expected a string");
  }
  return obj[k].get<std::string>();
}

// Attributes a status to the field path it came from, unless it already
// names a field.
inline absl::Status WithPath(const absl::Status& s, absl::string_view path) {
  if (s.ok() || absl::StrContains(s.message(), "field '")) return s;
  if (absl::EndsWith(path, ".")) path.remove_suffix(1);
  return absl::Status(s.code(),
                      absl::StrCat("field '", path, "': ", s.message()));
}

}  // namespace monopriv::internal

#endif  // MONOPRIV_SRC_JSON_FIELDS_H_
