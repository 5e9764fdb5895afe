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

// Verdict reports. CSV columns, in order:
//
//   check,mechanism,profile_id,player,verdict,margin,witness
//
// `player` is 1-based and empty for whole-input rows. Numbers use %.17g so
// reports are byte-identical across runs. The JSON report holds the same
// rows plus the full audit records.

#ifndef MONOPRIV_REPORT_H_
#define MONOPRIV_REPORT_H_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "absl/strings/string_view.h"
#include "monopriv/verifiers.h"
#include "nlohmann/json.hpp"

namespace monopriv {

struct ReportRow {
  std::string check;
  std::string mechanism;
  std::string profile_id;
  std::optional<size_t> player;
  Verdict verdict = Verdict::kPass;
  double margin = 0;
  std::string witness;
};

struct Report {
  std::vector<ReportRow> rows;
  std::vector<nlohmann::ordered_json> audits;

  Verdict Overall() const;
  // 0 all pass, 1 any fail, 2 any inconclusive (and no fail).
  int ExitCode() const;
};

inline constexpr int kExitConfigError = 3;

// RFC 4180 quoting: fields with commas, quotes or line breaks are quoted
// and embedded quotes doubled.
std::string CsvField(absl::string_view field);

std::string FormatDouble(double v);

std::string ReportToCsv(const Report& report);
nlohmann::ordered_json ReportToJson(const Report& report);

// Fixed-width table for terminals.
std::string RenderRows(const Report& report);

}  // namespace monopriv

#endif  // MONOPRIV_REPORT_H_
