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

#include "monopriv/report.h"

#include <map>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"

namespace monopriv {

Verdict Report::Overall() const {
  Verdict v = Verdict::kPass;
  for (const ReportRow& r : rows) v = CombineVerdicts(v, r.verdict);
  return v;
}

int Report::ExitCode() const {
  switch (Overall()) {
    case Verdict::kPass:
      return 0;
    case Verdict::kFail:
      return 1;
    case Verdict::kInconclusive:
      return 2;
  }
  return 2;
}

std::string CsvField(absl::string_view field) {
  if (field.find_first_of(",\"\r\n") == absl::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string FormatDouble(double v) { return absl::StrFormat("%.17g", v); }

std::string ReportToCsv(const Report& report) {
  std::string out =
      "check,mechanism,profile_id,player,verdict,margin,witness\r\n";
  for (const ReportRow& r : report.rows) {
    const std::string fields[] = {
        r.check,
        r.mechanism,
        r.profile_id,
        r.player.has_value() ? absl::StrCat(*r.player) : "",
        std::string(VerdictName(r.verdict)),
        FormatDouble(r.margin),
        r.witness};
    absl::StrAppend(&out,
                    absl::StrJoin(fields, ",",
                                  [](std::string* o, const std::string& f) {
                                    absl::StrAppend(o, CsvField(f));
                                  }),
                    "\r\n");
  }
  return out;
}

nlohmann::ordered_json ReportToJson(const Report& report) {
  using Json = nlohmann::ordered_json;
  Json rows = Json::array();
  std::map<std::string, int> counts{{"pass", 0}, {"fail", 0},
                                    {"inconclusive", 0}};
  for (const ReportRow& r : report.rows) {
    Json j;
    j["check"] = r.check;
    j["mechanism"] = r.mechanism;
    j["profile_id"] = r.profile_id;
    j["player"] = r.player.has_value() ? Json(*r.player) : Json(nullptr);
    j["verdict"] = std::string(VerdictName(r.verdict));
    // Non-finite margins have no JSON number form.
    j["margin"] = FormatDouble(r.margin);
    j["witness"] = r.witness;
    rows.push_back(std::move(j));
    ++counts[std::string(VerdictName(r.verdict))];
  }
  Json out;
  Json summary;
  summary["rows"] = report.rows.size();
  for (const auto& [k, v] : counts) summary[k] = v;
  summary["overall"] = std::string(VerdictName(report.Overall()));
  summary["exit_code"] = report.ExitCode();
  out["summary"] = std::move(summary);
  out["rows"] = std::move(rows);
  out["audits"] = report.audits;
  return out;
}

std::string RenderRows(const Report& report) {
  std::string out = absl::StrFormat("%-18s %-12s %-10s %-6s %-12s %-13s %s\n",
                                    "check", "mechanism", "profile", "player",
                                    "verdict", "margin", "witness");
  for (const ReportRow& r : report.rows) {
    absl::StrAppend(
        &out, absl::StrFormat(
                  "%-18s %-12s %-10s %-6s %-12s %-13.6g %s\n", r.check,
                  r.mechanism, r.profile_id,
                  r.player.has_value() ? absl::StrCat(*r.player) : "-",
                  VerdictName(r.verdict), r.margin, r.witness));
  }
  return out;
}

}  // namespace monopriv
