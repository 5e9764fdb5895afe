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

#include "monopriv/runner.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <thread>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "json_fields.h"
#include "monopriv/audits.h"
#include "monopriv/geometric.h"
#include "monopriv/loss_model.h"
#include "monopriv/mechanisms.h"
#include "monopriv/verifiers.h"

namespace monopriv {
namespace {

using internal::FieldError;
using internal::Json;

enum class PlayerFilter { kAll, kBelowThreshold, kBelowThresholdOrBit0 };

struct LabeledSpec {
  std::string label;
  AccuracySpec spec;
};

struct CheckSpec {
  std::string name;
  PlayerFilter players = PlayerFilter::kAll;
  std::vector<double> extra_deviations;
  // accuracy
  bool monte_carlo = false;
  int64_t trials = 10000;
  std::vector<LabeledSpec> specs;
  std::vector<double> gamma_ns;
  // dp
  std::optional<double> epsilon;
  // distinguishability
  double delta = 0;
  NeighborRelation relation = NeighborRelation::kGeneral;
  std::optional<Distinguishability> expect_outcome;
  // audits
  size_t audit_n = 0;
  std::optional<double> audit_delta;
  std::shared_ptr<const LossModel> audit_loss;
  std::string expect_audit;
  TradeoffParams tradeoff;
};

struct Plan {
  std::unique_ptr<Mechanism> mechanism;
  std::shared_ptr<const LossModel> loss;
  std::vector<CheckSpec> checks;
};

absl::Status CheckKeys(const Json& obj, const std::string& path,
                       std::initializer_list<absl::string_view> allowed) {
  for (const auto& [key, unused] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      return FieldError(absl::StrCat(path, key), "unknown parameter");
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<double>> ReadNumbers(const Json& obj,
                                                absl::string_view key,
                                                const std::string& path) {
  std::vector<double> out;
  const std::string k(key);
  if (!obj.contains(k)) return out;
  const Json& v = obj[k];
  if (v.is_number()) {
    out.push_back(v.get<double>());
    return out;
  }
  if (!v.is_array()) {
    return FieldError(absl::StrCat(path, key), "expected a number or array");
  }
  for (const Json& e : v) {
    if (!e.is_number()) {
      return FieldError(absl::StrCat(path, key), "expected numbers");
    }
    out.push_back(e.get<double>());
  }
  return out;
}

absl::StatusOr<PlayerFilter> ReadFilter(const Json& obj,
                                        const std::string& path,
                                        const Mechanism& m) {
  absl::StatusOr<std::string> s =
      internal::ReadString(obj, "players", path, "all");
  if (!s.ok()) return s.status();
  PlayerFilter f;
  if (*s == "all") {
    f = PlayerFilter::kAll;
  } else if (*s == "below_threshold") {
    f = PlayerFilter::kBelowThreshold;
  } else if (*s == "below_threshold_or_bit0") {
    f = PlayerFilter::kBelowThresholdOrBit0;
  } else {
    return FieldError(absl::StrCat(path, "players"),
                      absl::StrCat("unknown filter \"", *s,
                                   "\" (expected all, below_threshold or "
                                   "below_threshold_or_bit0)"));
  }
  if (f != PlayerFilter::kAll && !m.valuation_threshold().has_value()) {
    return FieldError(absl::StrCat(path, "players"),
                      absl::StrCat(m.name(), " has no valuation threshold"));
  }
  return f;
}

absl::Status ReadAudit(const Json& p, const std::string& path,
                       const RunConfig& config, const Plan& plan,
                       CheckSpec& c) {
  absl::StatusOr<int64_t> n = internal::ReadInteger(
      p, "n", path,
      plan.mechanism->player_count().has_value()
          ? std::optional<int64_t>(
                static_cast<int64_t>(*plan.mechanism->player_count()))
          : std::nullopt);
  if (!n.ok()) return n.status();
  if (*n < 1 || *n > 64) {
    return FieldError(absl::StrCat(path, "n"), "must be in [1, 64]");
  }
  c.audit_n = static_cast<size_t>(*n);
  if (p.contains("delta")) {
    absl::StatusOr<double> d = internal::ReadNumber(p, "delta", path);
    if (!d.ok()) return d.status();
    c.audit_delta = *d;
  }
  if (p.contains("loss_model")) {
    absl::StatusOr<std::string> name =
        internal::ReadString(p, "loss_model", path);
    if (!name.ok()) return name.status();
    Json lp = p.contains("loss_params") ? p["loss_params"] : Json();
    absl::StatusOr<std::unique_ptr<LossModel>> model =
        MakeLossModel(*name, lp.is_object() && lp.contains(*name)
                                 ? lp[*name]
                                 : lp);
    if (!model.ok()) {
      return internal::WithPath(model.status(),
                                absl::StrCat(path, "loss_model"));
    }
    c.audit_loss = std::shared_ptr<const LossModel>(*std::move(model));
  } else {
    c.audit_loss = plan.loss;
  }
  absl::StatusOr<std::string> expect =
      internal::ReadString(p, "expect", path, "");
  if (!expect.ok()) return expect.status();
  if (!expect->empty() && *expect != "impossibility_respected" &&
      *expect != "none" && !ParsePremise(*expect).ok()) {
    return FieldError(absl::StrCat(path, "expect"),
                      absl::StrCat("unknown expectation \"", *expect,
                                   "\" (expected a premise name, "
                                   "impossibility_respected or none)"));
  }
  c.expect_audit = *expect;
  (void)config;
  return absl::OkStatus();
}

absl::StatusOr<Plan> BuildPlan(const RunConfig& config) {
  Plan plan;
  const Json mech_params = config.mechanism_params.contains(config.mechanism)
                               ? config.mechanism_params[config.mechanism]
                               : Json();
  absl::StatusOr<std::unique_ptr<Mechanism>> mech =
      MakeMechanism(config.mechanism, mech_params);
  if (!mech.ok()) return mech.status();
  plan.mechanism = *std::move(mech);
  const Json loss_params = config.loss_params.contains(config.loss_model)
                               ? config.loss_params[config.loss_model]
                               : Json();
  absl::StatusOr<std::unique_ptr<LossModel>> loss =
      MakeLossModel(config.loss_model, loss_params);
  if (!loss.ok()) return loss.status();
  plan.loss = std::shared_ptr<const LossModel>(*std::move(loss));

  if (!(config.mass_tol > 0 && config.mass_tol < 1)) {
    return FieldError("mass_tol", "must be in (0, 1)");
  }
  for (size_t k = 0; k < config.profiles.size(); ++k) {
    if (absl::Status s =
            plan.mechanism->ValidateProfile(config.profiles[k].profile);
        !s.ok()) {
      return FieldError(absl::StrCat("profiles[", k, "]"),
                        absl::StrCat("profile ", config.profiles[k].id, ": ",
                                     s.message()));
    }
  }
  for (const auto& [key, unused] : config.check_params.items()) {
    if (std::find(std::begin(kCheckNames), std::end(kCheckNames), key) ==
        std::end(kCheckNames)) {
      return FieldError(absl::StrCat("check_params.", key), "unknown check");
    }
  }

  for (const std::string& name : config.checks) {
    CheckSpec c;
    c.name = name;
    const std::string path = absl::StrCat("check_params.", name, ".");
    const Json p = config.check_params.contains(name)
                       ? config.check_params[name]
                       : Json::object();
    if (!p.is_object()) {
      return FieldError(absl::StrCat("check_params.", name),
                        "expected an object");
    }
    const Mechanism& m = *plan.mechanism;
    if (name == "ir") {
      if (absl::Status s = CheckKeys(p, path, {"players"}); !s.ok()) return s;
      absl::StatusOr<PlayerFilter> f = ReadFilter(p, path, m);
      if (!f.ok()) return f.status();
      c.players = *f;
    } else if (name == "truthful") {
      if (absl::Status s = CheckKeys(p, path, {"players", "extra_deviations"});
          !s.ok()) {
        return s;
      }
      absl::StatusOr<PlayerFilter> f = ReadFilter(p, path, m);
      if (!f.ok()) return f.status();
      c.players = *f;
      absl::StatusOr<std::vector<double>> extras =
          ReadNumbers(p, "extra_deviations", path);
      if (!extras.ok()) return extras.status();
      for (double v : *extras) {
        if (!std::isfinite(v)) {
          return FieldError(absl::StrCat(path, "extra_deviations"),
                            "deviations must be finite");
        }
      }
      c.extra_deviations = *extras;
    } else if (name == "accuracy") {
      if (absl::Status s =
              CheckKeys(p, path,
                        {"mode", "trials", "gamma_n", "specs", "alpha",
                         "alpha_prime", "beta"});
          !s.ok()) {
        return s;
      }
      absl::StatusOr<std::string> mode =
          internal::ReadString(p, "mode", path, "exact");
      if (!mode.ok()) return mode.status();
      if (*mode != "exact" && *mode != "monte_carlo") {
        return FieldError(absl::StrCat(path, "mode"),
                          "expected exact or monte_carlo");
      }
      c.monte_carlo = *mode == "monte_carlo";
      absl::StatusOr<int64_t> trials =
          internal::ReadInteger(p, "trials", path, 10000);
      if (!trials.ok()) return trials.status();
      if (*trials < 1) return FieldError(absl::StrCat(path, "trials"), ">= 1");
      c.trials = *trials;
      if (c.monte_carlo && !config.seed.has_value()) {
        return FieldError("seed", "required when accuracy mode is monte_carlo");
      }
      absl::StatusOr<std::vector<double>> gns = ReadNumbers(p, "gamma_n", path);
      if (!gns.ok()) return gns.status();
      for (double g : *gns) {
        if (!(g > 0) || !std::isfinite(g)) {
          return FieldError(absl::StrCat(path, "gamma_n"), "must be > 0");
        }
      }
      if (!gns->empty() && (!m.epsilon().has_value() ||
                            !m.valuation_threshold().has_value())) {
        return FieldError(absl::StrCat(path, "gamma_n"),
                          absl::StrCat(m.name(),
                                       " has no epsilon and threshold; give "
                                       "alpha, alpha_prime and beta"));
      }
      c.gamma_ns = *gns;
      auto read_spec = [&](const Json& obj,
                           const std::string& spath) -> absl::Status {
        if (absl::Status s = CheckKeys(obj, spath,
                                       {"alpha", "alpha_prime", "beta"});
            !s.ok()) {
          return s;
        }
        AccuracySpec spec;
        absl::StatusOr<double> a = internal::ReadNumber(obj, "alpha", spath);
        if (!a.ok()) return a.status();
        absl::StatusOr<double> ap =
            internal::ReadNumber(obj, "alpha_prime", spath, *a);
        if (!ap.ok()) return ap.status();
        absl::StatusOr<double> b = internal::ReadNumber(obj, "beta", spath);
        if (!b.ok()) return b.status();
        spec = {*a, *ap, *b};
        if (absl::Status s = spec.Validate(); !s.ok()) {
          return internal::WithPath(s, spath);
        }
        c.specs.push_back(
            {absl::StrFormat("alpha=%g alpha'=%g beta=%g", *a, *ap, *b),
             spec});
        return absl::OkStatus();
      };
      if (p.contains("specs")) {
        if (!p["specs"].is_array()) {
          return FieldError(absl::StrCat(path, "specs"), "expected an array");
        }
        for (size_t k = 0; k < p["specs"].size(); ++k) {
          if (absl::Status s = read_spec(
                  p["specs"][k], absl::StrCat(path, "specs[", k, "]."));
              !s.ok()) {
            return s;
          }
        }
      }
      if (p.contains("alpha") || p.contains("beta")) {
        Json single = Json::object();
        for (const char* key : {"alpha", "alpha_prime", "beta"}) {
          if (p.contains(key)) single[key] = p[key];
        }
        if (absl::Status s = read_spec(single, path); !s.ok()) return s;
      }
      if (c.specs.empty() && c.gamma_ns.empty()) {
        return FieldError(absl::StrCat("check_params.", name),
                          "give gamma_n, specs, or alpha and beta");
      }
    } else if (name == "dp") {
      if (absl::Status s = CheckKeys(p, path, {"players", "epsilon"});
          !s.ok()) {
        return s;
      }
      absl::StatusOr<PlayerFilter> f = ReadFilter(p, path, m);
      if (!f.ok()) return f.status();
      c.players = *f;
      if (p.contains("epsilon")) {
        absl::StatusOr<double> e = internal::ReadNumber(p, "epsilon", path);
        if (!e.ok()) return e.status();
        c.epsilon = *e;
      } else {
        c.epsilon = m.epsilon();
      }
      if (!c.epsilon.has_value()) {
        return FieldError(absl::StrCat(path, "epsilon"),
                          absl::StrCat(m.name(), " has no epsilon; give one"));
      }
    } else if (name == "distinguishability") {
      if (absl::Status s =
              CheckKeys(p, path, {"players", "delta", "relation", "expect"});
          !s.ok()) {
        return s;
      }
      absl::StatusOr<PlayerFilter> f = ReadFilter(p, path, m);
      if (!f.ok()) return f.status();
      c.players = *f;
      absl::StatusOr<double> d = internal::ReadNumber(p, "delta", path);
      if (!d.ok()) return d.status();
      if (!(*d > 0)) {
        return FieldError(absl::StrCat(path, "delta"), "must be > 0");
      }
      c.delta = *d;
      absl::StatusOr<std::string> rel =
          internal::ReadString(p, "relation", path, "general");
      if (!rel.ok()) return rel.status();
      absl::StatusOr<NeighborRelation> r = ParseRelation(*rel);
      if (!r.ok()) {
        return FieldError(absl::StrCat(path, "relation"), r.status().message());
      }
      c.relation = *r;
      absl::StatusOr<std::string> e =
          internal::ReadString(p, "expect", path, "");
      if (!e.ok()) return e.status();
      if (*e == "distinguishable") {
        c.expect_outcome = Distinguishability::kDistinguishable;
      } else if (*e == "not_distinguishable") {
        c.expect_outcome = Distinguishability::kNotDistinguishable;
      } else if (!e->empty()) {
        return FieldError(absl::StrCat(path, "expect"),
                          "expected distinguishable or not_distinguishable");
      }
    } else if (name == "audit_general" || name == "audit_monotonic") {
      if (absl::Status s = CheckKeys(
              p, path, {"n", "delta", "loss_model", "loss_params", "expect"});
          !s.ok()) {
        return s;
      }
      if (absl::Status s = ReadAudit(p, path, config, plan, c); !s.ok()) {
        return s;
      }
    } else if (name == "audit_tradeoff") {
      if (absl::Status s =
              CheckKeys(p, path,
                        {"n", "loss_model", "loss_params", "expect", "tau",
                         "gamma", "eta", "beta", "max_pay"});
          !s.ok()) {
        return s;
      }
      if (absl::Status s = ReadAudit(p, path, config, plan, c); !s.ok()) {
        return s;
      }
      for (auto [key, dst] :
           {std::pair<const char*, double*>{"tau", &c.tradeoff.tau},
            {"gamma", &c.tradeoff.gamma},
            {"eta", &c.tradeoff.eta},
            {"beta", &c.tradeoff.beta}}) {
        absl::StatusOr<double> v = internal::ReadNumber(p, key, path);
        if (!v.ok()) return v.status();
        *dst = *v;
      }
      if (p.contains("max_pay")) {
        absl::StatusOr<double> v = internal::ReadNumber(p, "max_pay", path);
        if (!v.ok()) return v.status();
        c.tradeoff.max_pay = *v;
      }
      if (c.tradeoff.max_pay.has_value()) {
        if (absl::Status s =
                c.tradeoff.Validate(c.audit_n, *c.tradeoff.max_pay);
            !s.ok()) {
          return internal::WithPath(s, absl::StrCat("check_params.", name));
        }
      }
    }
    plan.checks.push_back(std::move(c));
  }
  return plan;
}

bool Selected(PlayerFilter f, const Mechanism& m, const PlayerType& p) {
  if (f == PlayerFilter::kAll) return true;
  const bool below = p.valuation <= *m.valuation_threshold();
  if (f == PlayerFilter::kBelowThreshold) return below;
  return below || p.bit == 0;
}

ReportRow ErrorRow(ReportRow row, const absl::Status& s) {
  row.verdict = Verdict::kInconclusive;
  row.margin = std::nan("");
  row.witness = absl::StrCat("error: ", s.message());
  return row;
}

std::vector<ReportRow> RowsForProfile(const Plan& plan, const CheckSpec& c,
                                      const RunConfig& config,
                                      const NamedProfile& np, size_t index) {
  const Mechanism& m = *plan.mechanism;
  const InputProfile& x = np.profile;
  std::vector<ReportRow> rows;
  ReportRow base;
  base.check = c.name;
  base.mechanism = std::string(m.name());
  base.profile_id = np.id;
  const double tol = config.mass_tol;

  if (c.name == "accuracy") {
    std::vector<LabeledSpec> specs = c.specs;
    for (double g : c.gamma_ns) {
      absl::StatusOr<AccuracySpec> s = ThresholdAccuracySpec(m, x, g);
      if (!s.ok()) {
        rows.push_back(ErrorRow(base, s.status()));
        continue;
      }
      specs.push_back({absl::StrFormat("gamma_n=%g", g), *s});
    }
    for (size_t k = 0; k < specs.size(); ++k) {
      absl::StatusOr<AccuracyResult> r =
          c.monte_carlo
              ? CheckAccuracyMonteCarlo(
                    m, x, specs[k].spec, c.trials,
                    *config.seed + 0x9E3779B97F4A7C15ull * (index * 64 + k + 1))
              : CheckAccuracyExact(m, x, specs[k].spec, tol);
      if (!r.ok()) {
        rows.push_back(ErrorRow(base, r.status()));
        continue;
      }
      ReportRow row = base;
      row.verdict = r->verdict;
      row.margin = r->margin;
      row.witness = absl::StrCat(specs[k].label, ": ", r->witness);
      rows.push_back(std::move(row));
    }
    return rows;
  }

  for (size_t i = 0; i < x.size(); ++i) {
    if (!Selected(c.players, m, x[i])) continue;
    ReportRow row = base;
    row.player = i + 1;
    if (c.name == "ir") {
      absl::StatusOr<IrResult> r = CheckIr(m, *plan.loss, x, i, tol);
      if (!r.ok()) {
        rows.push_back(ErrorRow(row, r.status()));
        continue;
      }
      row.verdict = r->verdict;
      row.margin = r->margin;
      row.witness = r->witness;
    } else if (c.name == "truthful") {
      const std::vector<double> devs =
          DefaultDeviations(m, x, i, c.extra_deviations);
      absl::StatusOr<TruthfulResult> r =
          CheckTruthful(m, *plan.loss, x, i, devs, tol);
      if (!r.ok()) {
        rows.push_back(ErrorRow(row, r.status()));
        continue;
      }
      row.verdict = r->verdict;
      row.margin = r->margin;
      row.witness = r->witness;
    } else if (c.name == "dp") {
      absl::StatusOr<DpResult> r = CheckDpLevel(m, x, i, *c.epsilon, tol);
      if (!r.ok()) {
        rows.push_back(ErrorRow(row, r.status()));
        continue;
      }
      row.verdict = r->verdict;
      row.margin = r->margin;
      row.witness = r->witness;
    } else if (c.name == "distinguishability") {
      absl::StatusOr<DistinguishabilityResult> r =
          CheckDistinguishable(m, x, {i, c.delta, c.relation}, tol);
      if (!r.ok()) {
        rows.push_back(ErrorRow(row, r.status()));
        continue;
      }
      const Interval best = r->witness.has_value() ? r->witness->distance
                                                   : Interval::Point(0);
      row.margin = r->outcome == Distinguishability::kDistinguishable
                       ? best.lo - c.delta
                       : best.hi - c.delta;
      if (r->outcome == Distinguishability::kInconclusive) {
        row.verdict = Verdict::kInconclusive;
      } else if (c.expect_outcome.has_value()) {
        row.verdict = r->outcome == *c.expect_outcome ? Verdict::kPass
                                                      : Verdict::kFail;
      } else {
        row.verdict = Verdict::kPass;
      }
      row.witness = std::string(DistinguishabilityName(r->outcome));
      if (r->witness.has_value()) {
        absl::StrAppend(&row.witness, " via ", ToString(r->witness->type),
                        absl::StrFormat(" distance=[%.17g, %.17g]", best.lo,
                                        best.hi));
      }
      if (r->suggested_mass_tol.has_value()) {
        absl::StrAppend(&row.witness,
                        absl::StrFormat("; retry with mass_tol %.3g",
                                        *r->suggested_mass_tol));
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// Evaluates fn(k) for k in [0, count) on worker threads; results are stored
// by index.
template <typename T, typename Fn>
std::vector<T> ParallelMap(size_t count, Fn fn) {
  std::vector<T> out(count);
  const size_t workers = std::max<size_t>(
      1, std::min<size_t>(count, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (size_t k = 0; k < count; ++k) out[k] = fn(k);
    return out;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (size_t k = next++; k < count; k = next++) out[k] = fn(k);
    });
  }
  for (std::thread& t : threads) t.join();
  return out;
}

ReportRow AuditRow(const CheckSpec& c, const Mechanism& m,
                   const AuditReport& a) {
  ReportRow row;
  row.check = c.name;
  row.mechanism = std::string(m.name());
  row.profile_id = "-";
  row.verdict = a.verdict();
  std::string outcome(ConclusionName(a.conclusion));
  if (a.first_failure.has_value()) {
    const PremiseCheck& f = a.checks[*a.first_failure];
    row.margin = f.margin;
    absl::StrAppend(&outcome, "; first failing premise ",
                    PremiseName(f.premise), " at ", f.hybrid);
    if (f.player > 0) absl::StrAppend(&outcome, " player ", f.player);
  } else {
    row.margin = 0;
  }
  absl::StrAppend(&outcome,
                  absl::StrFormat("; end-to-end [%.17g, %.17g]",
                                  a.chain.end_to_end.lo,
                                  a.chain.end_to_end.hi));
  if (a.certified_beta_sup.has_value()) {
    absl::StrAppend(&outcome,
                    absl::StrFormat("; accuracy fails for every beta < %.17g",
                                    *a.certified_beta_sup));
  }
  if (!c.expect_audit.empty()) {
    std::string got = "none";
    if (a.conclusion == AuditConclusion::kImpossibilityRespected) {
      got = "impossibility_respected";
    }
    if (a.conclusion == AuditConclusion::kPremiseViolated) {
      got = std::string(PremiseName(*a.failed_premise()));
    }
    const bool match = c.expect_audit == got ||
                       (c.expect_audit == "accuracy" &&
                        got == "impossibility_respected");
    if (a.conclusion == AuditConclusion::kInconclusive) {
      row.verdict = Verdict::kInconclusive;
    } else {
      row.verdict = match ? Verdict::kPass : Verdict::kFail;
    }
    absl::StrAppend(&outcome, "; expected ", c.expect_audit);
  }
  row.witness = outcome;
  return row;
}

}  // namespace

absl::Status ValidateConfig(const RunConfig& config) {
  return BuildPlan(config).status();
}

absl::StatusOr<RunResult> Run(const RunConfig& config) {
  absl::StatusOr<Plan> plan = BuildPlan(config);
  if (!plan.ok()) return plan.status();
  RunResult result;
  const Mechanism& m = *plan->mechanism;
  for (const CheckSpec& c : plan->checks) {
    if (c.name.rfind("audit_", 0) == 0) {
      absl::StatusOr<AuditReport> a;
      if (c.name == "audit_general") {
        a = AuditGeneralImpossibility(m, *c.audit_loss, c.audit_n,
                                      {c.audit_delta, config.mass_tol});
      } else if (c.name == "audit_monotonic") {
        a = AuditMonotonicImpossibility(m, *c.audit_loss, c.audit_n,
                                        {c.audit_delta, config.mass_tol});
      } else {
        a = AuditPaymentAccuracyTradeoff(m, *c.audit_loss, c.audit_n,
                                         c.tradeoff, config.mass_tol);
      }
      if (!a.ok()) {
        ReportRow row;
        row.check = c.name;
        row.mechanism = std::string(m.name());
        row.profile_id = "-";
        result.report.rows.push_back(ErrorRow(row, a.status()));
        continue;
      }
      result.report.rows.push_back(AuditRow(c, m, *a));
      result.report.audits.push_back(AuditToJson(*a));
      result.audit_tables.push_back(RenderAudit(*a));
      continue;
    }
    std::vector<std::vector<ReportRow>> per_profile =
        ParallelMap<std::vector<ReportRow>>(
            config.profiles.size(), [&](size_t k) {
              return RowsForProfile(*plan, c, config, config.profiles[k], k);
            });
    for (std::vector<ReportRow>& rows : per_profile) {
      for (ReportRow& r : rows) result.report.rows.push_back(std::move(r));
    }
  }
  return result;
}

absl::Status WriteOutputs(const RunConfig& config, const Report& report) {
  auto write = [](const std::string& path,
                  const std::string& text) -> absl::Status {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (out) out << text;
    if (!out) {
      return absl::UnavailableError(absl::StrCat("cannot write ", path));
    }
    return absl::OkStatus();
  };
  if (config.csv_path.has_value()) {
    if (absl::Status s = write(*config.csv_path, ReportToCsv(report));
        !s.ok()) {
      return s;
    }
  }
  if (config.report_path.has_value()) {
    if (absl::Status s =
            write(*config.report_path, ReportToJson(report).dump(2) + "\n");
        !s.ok()) {
      return s;
    }
  }
  return absl::OkStatus();
}

std::string RenderSummary(const RunConfig& config, const RunResult& result) {
  std::string out = absl::StrFormat(
      "mechanism %s | loss %s | %d profiles | mass_tol %g\n",
      config.mechanism, config.loss_model, config.profiles.size(),
      config.mass_tol);
  std::vector<std::string> order;
  std::map<std::string, std::map<Verdict, int>> counts;
  for (const ReportRow& r : result.report.rows) {
    if (!counts.contains(r.check)) order.push_back(r.check);
    ++counts[r.check][r.verdict];
  }
  absl::StrAppend(&out, absl::StrFormat("%-20s %8s %8s %13s\n", "check",
                                        "pass", "fail", "inconclusive"));
  for (const std::string& check : order) {
    auto& c = counts[check];
    absl::StrAppend(&out, absl::StrFormat("%-20s %8d %8d %13d\n", check,
                                          c[Verdict::kPass], c[Verdict::kFail],
                                          c[Verdict::kInconclusive]));
  }
  Report shown;
  for (const ReportRow& r : result.report.rows) {
    if (r.verdict != Verdict::kPass || r.profile_id == "-") {
      if (shown.rows.size() < 20) shown.rows.push_back(r);
    }
  }
  if (!shown.rows.empty()) {
    absl::StrAppend(&out, "\n", RenderRows(shown));
  }
  for (const std::string& table : result.audit_tables) {
    absl::StrAppend(&out, "\n", table);
  }
  absl::StrAppend(&out, "\noverall: ", VerdictName(result.report.Overall()),
                  "\n");
  return out;
}

absl::StatusOr<std::string> DistCalculator(const DistQuery& q) {
  absl::StatusOr<GeomParams> g = GeomParams::Create(q.epsilon);
  if (!g.ok()) return g.status();
  absl::StatusOr<CountDistribution> a =
      ShiftedGeomDist(*g, q.shift1, q.mass_tol);
  if (!a.ok()) return a.status();
  absl::StatusOr<CountDistribution> b =
      ShiftedGeomDist(*g, q.shift2, q.mass_tol);
  if (!b.ok()) return b.status();
  const Interval d = StatisticalDistance(*a, *b);
  std::string out = absl::StrFormat(
      "epsilon %.17g, shifts %d and %d, mass_tol %g\n"
      "statistical distance in [%.17g, %.17g]\n",
      q.epsilon, q.shift1, q.shift2, q.mass_tol, d.lo, d.hi);
  absl::StatusOr<double> level = DpLevel(*a, *b);
  if (level.ok()) {
    const double expected =
        q.epsilon * std::abs(static_cast<double>(q.shift1 - q.shift2));
    absl::StrAppend(&out, absl::StrFormat("dp level %.17g (epsilon*|shift "
                                          "difference| = %.17g)\n",
                                          *level, expected));
  } else {
    absl::StrAppend(&out, "dp level unavailable: ", level.status().message(),
                    "\n");
  }
  return out;
}

std::vector<std::string> DemoNames() {
  return {"thm_mon", "thm_imp", "thm_monimp", "tradeoff", "subsample"};
}

namespace {

// Every bit vector combined with every assignment of grid valuations.
std::vector<NamedProfile> GridProfiles(size_t n,
                                       const std::vector<double>& grid) {
  std::vector<NamedProfile> out;
  size_t combos = 1;
  for (size_t i = 0; i < n; ++i) combos *= grid.size();
  for (uint32_t mask = 0; mask < (1u << n); ++mask) {
    for (size_t c = 0; c < combos; ++c) {
      std::vector<int> bits(n);
      std::vector<double> vals(n);
      size_t rest = c;
      for (size_t i = 0; i < n; ++i) {
        bits[i] = (mask >> i) & 1u;
        vals[i] = grid[rest % grid.size()];
        rest /= grid.size();
      }
      out.push_back({absl::StrCat("p", out.size() + 1),
                     *InputProfile::FromVectors(bits, vals)});
    }
  }
  return out;
}

RunConfig Alg1Config(const std::string& name, double budget, double eps,
                     int64_t n) {
  RunConfig c;
  c.mechanism = name;
  c.mechanism_params[name] = {{"budget", budget}, {"epsilon", eps}, {"n", n}};
  return c;
}

Json IncreasingParams(double delta, const std::string& relation) {
  Json p;
  p["increasing_with_threshold"] = {{"delta", delta},
                                    {"relation", relation},
                                    {"threshold_slope", 1.0},
                                    {"threshold_offset", 1.0}};
  return p;
}

}  // namespace

absl::StatusOr<std::vector<RunConfig>> DemoConfigs(absl::string_view name) {
  std::vector<RunConfig> out;
  if (name == "thm_mon") {
    RunConfig c = Alg1Config("alg1", 8, 0.5, 4);
    const double theta = 8 / (2 * 0.5 * 4);
    c.profiles = GridProfiles(4, {0, theta / 2, theta, 2 * theta, 10 * theta});
    c.checks = {"truthful", "ir", "accuracy"};
    c.check_params["truthful"] = {{"players", "below_threshold"}};
    c.check_params["accuracy"] = {{"gamma_n", {2, 4}}};
    out.push_back(std::move(c));
  } else if (name == "thm_imp") {
    for (int n : {2, 3}) {
      RunConfig c;
      c.mechanism = "exact_sum";
      c.mechanism_params["exact_sum"] = {{"flat_pay", 0.0}};
      c.loss_model = "increasing_with_threshold";
      c.loss_params = IncreasingParams(1.0 / (6 * n), "general");
      c.checks = {"audit_general"};
      c.check_params["audit_general"] = {{"n", n}, {"expect", "ir"}};
      out.push_back(std::move(c));
    }
    RunConfig c = Alg1Config("alg1", 4, std::log(2.0), 2);
    c.loss_model = "increasing_with_threshold";
    c.loss_params = IncreasingParams(1.0 / 12, "general");
    c.checks = {"audit_general"};
    c.check_params["audit_general"] = {{"expect", "ir"}};
    out.push_back(std::move(c));
  } else if (name == "thm_monimp") {
    RunConfig c = Alg1Config("alg1", 4, std::log(2.0), 2);
    c.loss_model = "increasing_with_threshold";
    c.loss_params = IncreasingParams(1.0 / 6, "monotonic");
    c.checks = {"audit_monotonic"};
    c.check_params["audit_monotonic"] = {{"expect", "impossibility_respected"}};
    out.push_back(std::move(c));
    RunConfig s;
    s.mechanism = "subsample";
    s.mechanism_params["subsample"] = {{"flat_pay", 1.0},
                                       {"sample_size", 2},
                                       {"distinguishability_budget", 3.0}};
    s.loss_model = "increasing_with_threshold";
    s.loss_params = IncreasingParams(1.0 / 18, "monotonic");
    s.checks = {"audit_monotonic"};
    s.check_params["audit_monotonic"] = {{"n", 6}, {"expect", "ir"}};
    out.push_back(std::move(s));
  } else if (name == "tradeoff") {
    RunConfig c = Alg1Config("alg1", 8, 0.5, 8);
    c.loss_model = "growing_sd_monotonic";
    c.checks = {"audit_tradeoff"};
    c.check_params["audit_tradeoff"] = {{"tau", 10.0},
                                        {"eta", 0.25},
                                        {"gamma", 0.125},
                                        {"beta", 0.3},
                                        {"expect", "accuracy"}};
    out.push_back(std::move(c));
    RunConfig e;
    e.mechanism = "exact_sum";
    e.mechanism_params["exact_sum"] = {{"flat_pay", 1.0}};
    e.loss_model = "growing_sd_monotonic";
    e.checks = {"audit_tradeoff"};
    e.check_params["audit_tradeoff"] = {{"n", 8},     {"tau", 10.0},
                                        {"eta", 0.25}, {"gamma", 0.125},
                                        {"beta", 0.3}, {"expect", "ir"}};
    out.push_back(std::move(e));
  } else if (name == "subsample") {
    RunConfig c;
    c.mechanism = "subsample";
    c.mechanism_params["subsample"] = {{"flat_pay", 1.0}, {"sample_size", 5}};
    c.profiles = GridProfiles(10, {0.0});
    c.checks = {"accuracy"};
    Json specs = Json::array();
    for (double eta : {0.2, 0.4}) {
      specs.push_back({{"alpha", eta},
                       {"alpha_prime", eta},
                       {"beta", std::min(1.0, 2 * std::exp(-eta * eta * 5))}});
    }
    c.check_params["accuracy"] = {{"specs", specs}};
    out.push_back(std::move(c));
  } else {
    return absl::InvalidArgumentError(absl::StrCat(
        "unknown demo \"", name,
        "\" (expected thm_mon, thm_imp, thm_monimp, tradeoff or subsample)"));
  }
  for (const RunConfig& c : out) {
    if (absl::Status s = ValidateConfig(c); !s.ok()) return s;
  }
  return out;
}

}  // namespace monopriv
