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

#include "monopriv/audits.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "monopriv/mechanisms.h"

namespace monopriv {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kIntegralSlack = 1e-9;

std::string HybridLabel(size_t i, int j) {
  return absl::StrFormat("x(%d,%d)", i, j);
}

std::string FormatInterval(Interval v) {
  return absl::StrFormat("[%.17g, %.17g]", v.lo, v.hi);
}

// (1^ones 0^(n-ones), given valuations).
absl::StatusOr<InputProfile> PrefixProfile(size_t n, size_t ones,
                                           const std::vector<double>& vals) {
  std::vector<int> bits(n, 0);
  for (size_t j = 0; j < ones && j < n; ++j) bits[j] = 1;
  return InputProfile::FromVectors(bits, vals);
}

absl::Status FillDistances(const Mechanism& m, double mass_tol,
                           HybridChain& chain) {
  std::vector<CountDistribution> laws;
  laws.reserve(chain.inputs.size());
  for (const InputProfile& x : chain.inputs) {
    absl::StatusOr<CountDistribution> law = m.OutputDistribution(x, mass_tol);
    if (!law.ok()) return law.status();
    laws.push_back(*std::move(law));
  }
  chain.step_distances.clear();
  for (size_t k = 0; k + 1 < laws.size(); ++k) {
    chain.step_distances.push_back(OutputLawDistance(laws[k], laws[k + 1]));
  }
  chain.end_to_end = OutputLawDistance(laws.front(), laws.back());
  return chain.Validate();
}

// All payments on x are finite.
absl::StatusOr<PremiseCheck> FinitePayments(const Mechanism& m,
                                            const InputProfile& x,
                                            const std::string& label) {
  PremiseCheck c{Premise::kPayments, label, 0, Verdict::kPass, 0, ""};
  double largest = -kInf;
  for (size_t i = 0; i < x.size(); ++i) {
    absl::StatusOr<double> pay = m.ExpectedPayment(x, i);
    if (!pay.ok()) return pay.status();
    if (!std::isfinite(*pay)) {
      c.player = i + 1;
      c.verdict = Verdict::kFail;
      c.margin = -kInf;
      c.detail = absl::StrFormat("payment %.17g is not finite", *pay);
      return c;
    }
    largest = std::max(largest, *pay);
  }
  c.detail = absl::StrFormat("all payments finite; max %.17g", largest);
  return c;
}

absl::StatusOr<PremiseCheck> TruthfulIndifferent(const Mechanism& m,
                                                 const LossModel& model,
                                                 const InputProfile& x,
                                                 const std::string& label,
                                                 size_t i, double deviation,
                                                 double mass_tol) {
  const double devs[] = {deviation};
  absl::StatusOr<TruthfulResult> t =
      CheckTruthful(m, model, x, i, devs, mass_tol);
  if (!t.ok()) return t.status();
  return PremiseCheck{Premise::kTruthfulIndifferent, label, i + 1, t->verdict,
                      t->margin, t->witness};
}

absl::StatusOr<PremiseCheck> IndividuallyRational(
    const Mechanism& m, const LossModel& model, const InputProfile& x,
    const std::string& label, size_t i, double delta,
    NeighborRelation relation, double mass_tol) {
  absl::StatusOr<IrResult> ir = CheckIr(m, model, x, i, mass_tol);
  if (!ir.ok()) return ir.status();
  std::string detail = ir->witness;
  if (delta > 0) {
    absl::StatusOr<DistinguishabilityResult> d =
        CheckDistinguishable(m, x, {i, delta, relation}, mass_tol);
    if (!d.ok()) return d.status();
    absl::StrAppend(&detail, "; ", DistinguishabilityName(d->outcome),
                    " at delta=", absl::StrFormat("%.17g", delta));
    if (d->witness.has_value()) {
      absl::StrAppend(&detail, " via ", ToString(d->witness->type),
                      " distance=", FormatInterval(d->witness->distance));
    }
  }
  return PremiseCheck{Premise::kIr, label, i + 1, ir->verdict, ir->margin,
                      detail};
}

absl::StatusOr<PremiseCheck> Accurate(const Mechanism& m,
                                      const InputProfile& x,
                                      const std::string& label,
                                      const AccuracySpec& spec,
                                      double mass_tol) {
  absl::StatusOr<AccuracyResult> a = CheckAccuracyExact(m, x, spec, mass_tol);
  if (!a.ok()) return a.status();
  return PremiseCheck{Premise::kAccuracy, label, 0, a->verdict, a->margin,
                      a->witness};
}

// Sets first_failure and the conclusion from the recorded checks.
void Conclude(AuditReport& report) {
  std::vector<size_t> order(report.checks.size());
  for (size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return report.checks[a].premise < report.checks[b].premise;
  });
  report.first_failure.reset();
  for (size_t k : order) {
    if (report.checks[k].verdict == Verdict::kFail) {
      report.first_failure = k;
      break;
    }
  }
  bool other_unsure = false;
  bool accuracy_fail = false;
  bool accuracy_unsure = false;
  for (const PremiseCheck& c : report.checks) {
    const bool acc = c.premise == Premise::kAccuracy;
    if (c.verdict == Verdict::kInconclusive) {
      (acc ? accuracy_unsure : other_unsure) = true;
    } else if (c.verdict == Verdict::kFail && acc) {
      accuracy_fail = true;
    }
  }
  if (report.first_failure.has_value() &&
      report.checks[*report.first_failure].premise != Premise::kAccuracy) {
    report.conclusion = AuditConclusion::kPremiseViolated;
  } else if (other_unsure) {
    report.conclusion = AuditConclusion::kInconclusive;
  } else if (accuracy_fail) {
    report.conclusion = AuditConclusion::kImpossibilityRespected;
  } else if (accuracy_unsure) {
    report.conclusion = AuditConclusion::kInconclusive;
  } else {
    report.conclusion = AuditConclusion::kTheoremContradicted;
  }
}

absl::Status RequireThreshold(const LossModel& model) {
  if (!model.Threshold(0, *InputProfile::FromVectors(std::vector<int>{0},
                                                     std::vector<double>{0}),
                       0)
           .has_value()) {
    return absl::FailedPreconditionError(absl::StrCat(
        "loss model ", LossKindName(model.kind()),
        " lacks a threshold function; use increasing_with_threshold"));
  }
  if (!model.properties().respects_indifference) {
    return absl::FailedPreconditionError(
        "loss model does not respect indifference (threshold offset must be "
        ">= slope)");
  }
  return absl::OkStatus();
}

absl::Status ValidateSize(const Mechanism& m, size_t n) {
  if (n < 1) return absl::InvalidArgumentError("audit needs n >= 1");
  if (m.player_count().has_value() && *m.player_count() != n) {
    return absl::InvalidArgumentError(
        absl::StrCat("audit n = ", n, " but ", m.name(), " is built for ",
                     *m.player_count(), " players"));
  }
  return absl::OkStatus();
}

absl::StatusOr<double> ResolveDelta(std::optional<double> delta,
                                    double theorem_max) {
  const double d = delta.value_or(theorem_max);
  if (!(d > 0) || d > theorem_max * (1 + 1e-12)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "delta must be in (0, %.17g], got %.17g", theorem_max, d));
  }
  return d;
}

}  // namespace

absl::Status HybridChain::Validate() const {
  if (inputs.empty()) return absl::InvalidArgumentError("empty hybrid chain");
  if (labels.size() != inputs.size()) {
    return absl::InternalError("hybrid labels do not match inputs");
  }
  for (size_t k = 0; k + 1 < inputs.size(); ++k) {
    if (inputs[k].size() != inputs[k + 1].size() ||
        inputs[k].DifferingPlayers(inputs[k + 1]).size() != 1) {
      return absl::InternalError(absl::StrCat(
          labels[k], " and ", labels[k + 1],
          " must differ in exactly one player"));
    }
  }
  if (step_distances.size() + 1 != inputs.size()) {
    return absl::InternalError("step distance count mismatch");
  }
  double total = 0;
  for (const Interval& d : step_distances) total += d.hi;
  if (end_to_end.lo > total + 1e-12) {
    return absl::InternalError(absl::StrFormat(
        "end-to-end distance %.17g exceeds the sum of steps %.17g",
        end_to_end.lo, total));
  }
  return absl::OkStatus();
}

absl::string_view PremiseName(Premise p) {
  switch (p) {
    case Premise::kPayments:
      return "payments";
    case Premise::kTruthfulIndifferent:
      return "truthful_indifferent";
    case Premise::kIr:
      return "ir";
    case Premise::kAccuracy:
      return "accuracy";
  }
  return "unknown";
}

absl::StatusOr<Premise> ParsePremise(absl::string_view name) {
  for (Premise p : {Premise::kPayments, Premise::kTruthfulIndifferent,
                    Premise::kIr, Premise::kAccuracy}) {
    if (PremiseName(p) == name) return p;
  }
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown premise \"", name,
      "\" (expected payments, truthful_indifferent, ir or accuracy)"));
}

absl::string_view ConclusionName(AuditConclusion c) {
  switch (c) {
    case AuditConclusion::kPremiseViolated:
      return "premise violated";
    case AuditConclusion::kImpossibilityRespected:
      return "impossibility respected";
    case AuditConclusion::kTheoremContradicted:
      return "theorem contradicted";
    case AuditConclusion::kInconclusive:
      return "inconclusive";
  }
  return "unknown";
}

Verdict AuditReport::verdict() const {
  switch (conclusion) {
    case AuditConclusion::kTheoremContradicted:
      return Verdict::kFail;
    case AuditConclusion::kInconclusive:
      return Verdict::kInconclusive;
    default:
      return Verdict::kPass;
  }
}

std::optional<Premise> AuditReport::failed_premise() const {
  if (!first_failure.has_value()) return std::nullopt;
  return checks[*first_failure].premise;
}

absl::StatusOr<double> MaxZeroValuationPayment(const Mechanism& m, size_t n) {
  if (absl::Status s = ValidateSize(m, n); !s.ok()) return s;
  const std::vector<double> zeros(n, 0.0);
  double best = -kInf;
  auto visit = [&](const std::vector<int>& bits) -> absl::Status {
    absl::StatusOr<InputProfile> x = InputProfile::FromVectors(bits, zeros);
    if (!x.ok()) return x.status();
    for (size_t i = 0; i < n; ++i) {
      absl::StatusOr<double> pay = m.ExpectedPayment(*x, i);
      if (!pay.ok()) return pay.status();
      best = std::max(best, *pay);
    }
    return absl::OkStatus();
  };
  std::vector<int> bits(n, 0);
  if (n <= 16) {
    for (uint32_t mask = 0; mask < (1u << n); ++mask) {
      for (size_t j = 0; j < n; ++j) bits[j] = (mask >> j) & 1u;
      if (absl::Status s = visit(bits); !s.ok()) return s;
    }
  } else {
    for (size_t ones = 0; ones <= n; ++ones) {
      for (size_t j = 0; j < n; ++j) bits[j] = j < ones ? 1 : 0;
      if (absl::Status s = visit(bits); !s.ok()) return s;
    }
  }
  return best;
}

absl::StatusOr<AuditReport> AuditGeneralImpossibility(
    const Mechanism& m, const LossModel& model, size_t n,
    const GeneralAuditOptions& options) {
  if (absl::Status s = ValidateSize(m, n); !s.ok()) return s;
  if (absl::Status s = RequireThreshold(model); !s.ok()) return s;
  absl::StatusOr<double> delta =
      ResolveDelta(options.delta, 1.0 / (6.0 * static_cast<double>(n)));
  if (!delta.ok()) return delta.status();
  const double tol = options.mass_tol;

  absl::StatusOr<double> pay_cap = MaxZeroValuationPayment(m, n);
  if (!pay_cap.ok()) return pay_cap.status();
  const double p = *pay_cap;

  AuditReport report;
  report.audit = "general";
  report.mechanism = std::string(m.name());
  report.loss_model = std::string(LossKindName(model.kind()));
  report.delta = *delta;
  if (!std::isfinite(p)) {
    report.checks.push_back({Premise::kPayments, "all b with v = 0", 0,
                             Verdict::kFail, -kInf,
                             "zero-valuation payments are unbounded"});
    Conclude(report);
    return report;
  }

  // L = max over i and zero-valuation inputs of T_i(P, b, 0).
  double big_l = -kInf;
  const std::vector<double> zeros(n, 0.0);
  for (size_t ones = 0; ones <= n; ++ones) {
    absl::StatusOr<InputProfile> x = PrefixProfile(n, ones, zeros);
    if (!x.ok()) return x.status();
    for (size_t i = 0; i < n; ++i) {
      big_l = std::max(big_l, *model.Threshold(p, *x, i));
    }
  }

  HybridChain& chain = report.chain;
  std::vector<double> vals(n, 0.0);
  for (size_t i = 1; i <= n; ++i) {
    std::fill(vals.begin(), vals.end(), 0.0);
    absl::StatusOr<InputProfile> x0 = PrefixProfile(n, i - 1, vals);
    if (!x0.ok()) return x0.status();
    vals[i - 1] = big_l;
    absl::StatusOr<InputProfile> x1 = PrefixProfile(n, i, vals);
    if (!x1.ok()) return x1.status();
    chain.inputs.push_back(*x0);
    chain.labels.push_back(HybridLabel(i, 0));
    chain.inputs.push_back(*x1);
    chain.labels.push_back(HybridLabel(i, 1));
    chain.payments.push_back(p);
    chain.thresholds.push_back(big_l);
  }
  absl::StatusOr<InputProfile> last = PrefixProfile(n, n, zeros);
  if (!last.ok()) return last.status();
  chain.inputs.push_back(*last);
  chain.labels.push_back(HybridLabel(n + 1, 0));
  if (absl::Status s = FillDistances(m, tol, chain); !s.ok()) return s;

  for (size_t k = 0; k < chain.inputs.size(); ++k) {
    absl::StatusOr<PremiseCheck> c =
        FinitePayments(m, chain.inputs[k], chain.labels[k]);
    if (!c.ok()) return c.status();
    report.checks.push_back(*c);
  }
  // Truthfulness for the indifferent player i in x(i+1,0): declaring L
  // instead of 0 moves the input to x(i,1).
  for (size_t i = 1; i <= n; ++i) {
    absl::StatusOr<PremiseCheck> c =
        TruthfulIndifferent(m, model, chain.inputs[2 * i], chain.labels[2 * i],
                            i - 1, big_l, tol);
    if (!c.ok()) return c.status();
    report.checks.push_back(*c);
  }
  for (size_t i = 1; i <= n; ++i) {
    absl::StatusOr<PremiseCheck> c = IndividuallyRational(
        m, model, chain.inputs[2 * i - 1], chain.labels[2 * i - 1], i - 1,
        *delta, NeighborRelation::kGeneral, tol);
    if (!c.ok()) return c.status();
    report.checks.push_back(*c);
  }
  const AccuracySpec half_third{0.5, 0.5, 1.0 / 3.0};
  for (size_t k : {size_t{0}, chain.inputs.size() - 1}) {
    absl::StatusOr<PremiseCheck> c =
        Accurate(m, chain.inputs[k], chain.labels[k], half_third, tol);
    if (!c.ok()) return c.status();
    report.checks.push_back(*c);
  }
  Conclude(report);

  report.notes.push_back(absl::StrFormat(
      "P = %.17g (max zero-valuation payment), L = %.17g", p, big_l));
  report.notes.push_back(absl::StrFormat(
      "end-to-end distance %s; the chain argument bounds it by 2n*delta = "
      "%.17g when every premise holds",
      FormatInterval(chain.end_to_end), 2.0 * static_cast<double>(n) * *delta));
  return report;
}

absl::StatusOr<AuditReport> AuditMonotonicImpossibility(
    const Mechanism& m, const LossModel& model, size_t n,
    const MonotonicAuditOptions& options) {
  if (absl::Status s = ValidateSize(m, n); !s.ok()) return s;
  if (absl::Status s = RequireThreshold(model); !s.ok()) return s;
  absl::StatusOr<double> delta =
      ResolveDelta(options.delta, 1.0 / (3.0 * static_cast<double>(n)));
  if (!delta.ok()) return delta.status();
  const double tol = options.mass_tol;

  AuditReport report;
  report.audit = "monotonic";
  report.mechanism = std::string(m.name());
  report.loss_model = std::string(LossKindName(model.kind()));
  report.delta = *delta;
  HybridChain& chain = report.chain;

  std::vector<double> vals(n, 0.0);
  absl::StatusOr<InputProfile> first = PrefixProfile(n, 0, vals);
  if (!first.ok()) return first.status();
  chain.inputs.push_back(*first);
  chain.labels.push_back(HybridLabel(1, 0));
  std::vector<InputProfile> aux;
  for (size_t i = 1; i <= n; ++i) {
    absl::StatusOr<InputProfile> x1 = PrefixProfile(n, i, vals);
    if (!x1.ok()) return x1.status();
    aux.push_back(*x1);
    absl::StatusOr<PremiseCheck> fin =
        FinitePayments(m, *x1, HybridLabel(i, 1));
    if (!fin.ok()) return fin.status();
    report.checks.push_back(*fin);
    absl::StatusOr<double> pi = m.ExpectedPayment(*x1, i - 1);
    if (!pi.ok()) return pi.status();
    if (fin->verdict == Verdict::kFail) {
      // L_i is undefined past an infinite payment; the chain stops here.
      Conclude(report);
      report.notes.push_back(absl::StrCat("chain truncated at ",
                                          HybridLabel(i, 1)));
      if (absl::Status s = FillDistances(m, tol, chain); !s.ok()) return s;
      return report;
    }
    const double li = *model.Threshold(*pi, *x1, i - 1);
    vals[i - 1] = li;
    absl::StatusOr<InputProfile> next = PrefixProfile(n, i, vals);
    if (!next.ok()) return next.status();
    chain.inputs.push_back(*next);
    chain.labels.push_back(HybridLabel(i + 1, 0));
    chain.payments.push_back(*pi);
    chain.thresholds.push_back(li);
  }
  if (absl::Status s = FillDistances(m, tol, chain); !s.ok()) return s;

  for (size_t k = 1; k < chain.inputs.size(); ++k) {
    absl::StatusOr<PremiseCheck> c =
        FinitePayments(m, chain.inputs[k], chain.labels[k]);
    if (!c.ok()) return c.status();
    report.checks.push_back(*c);
  }
  // Player i has valuation 0 in x(i,1); declaring L_i gives x(i+1,0).
  for (size_t i = 1; i <= n; ++i) {
    absl::StatusOr<PremiseCheck> c =
        TruthfulIndifferent(m, model, aux[i - 1], HybridLabel(i, 1), i - 1,
                            chain.thresholds[i - 1], tol);
    if (!c.ok()) return c.status();
    report.checks.push_back(*c);
  }
  for (size_t i = 1; i <= n; ++i) {
    absl::StatusOr<PremiseCheck> c = IndividuallyRational(
        m, model, chain.inputs[i], chain.labels[i], i - 1, *delta,
        NeighborRelation::kMonotonic, tol);
    if (!c.ok()) return c.status();
    report.checks.push_back(*c);
  }
  const AccuracySpec half_third{0.5, 0.5, 1.0 / 3.0};
  for (size_t k : {size_t{0}, chain.inputs.size() - 1}) {
    absl::StatusOr<PremiseCheck> c =
        Accurate(m, chain.inputs[k], chain.labels[k], half_third, tol);
    if (!c.ok()) return c.status();
    report.checks.push_back(*c);
  }
  Conclude(report);

  report.notes.push_back(absl::StrFormat(
      "end-to-end distance %s; the chain argument bounds it by n*delta = "
      "%.17g when every premise holds",
      FormatInterval(chain.end_to_end), static_cast<double>(n) * *delta));

  // Largest distance any single player can cause along the chain.
  double per_player = 0;
  for (const InputProfile& x : chain.inputs) {
    for (size_t i = 0; i < n; ++i) {
      absl::StatusOr<std::vector<NeighborDistance>> ds =
          NeighborOutputDistances(m, x, i, NeighborRelation::kMonotonic, tol);
      if (!ds.ok()) return ds.status();
      for (const NeighborDistance& d : *ds) {
        per_player = std::max(per_player, d.distance.hi);
      }
    }
  }
  std::string note = absl::StrFormat(
      "max per-player monotonic-neighbor distance on the chain: %.17g",
      per_player);
  if (const auto* sub = dynamic_cast<const SubsampleMechanism*>(&m)) {
    const double nn = static_cast<double>(n);
    const double k = static_cast<double>(sub->params().sample_size);
    const double c = sub->params().distinguishability_budget;
    absl::StrAppend(&note, absl::StrFormat(" <= k/n = %.17g", k / nn));
    if (std::isfinite(c)) {
      absl::StrAppend(&note, absl::StrFormat(" < C/n = %.17g", c / nn));
    }
    absl::StrAppend(&note,
                    "; subsampling bounds each player's influence instead of "
                    "meeting the premises on every input");
  }
  report.notes.push_back(note);
  return report;
}

absl::Status TradeoffParams::Validate(size_t n, double p) const {
  const double nn = static_cast<double>(n);
  if (!(tau > 0) || !(gamma > 0) || !(eta > 0) || !std::isfinite(tau) ||
      !std::isfinite(gamma) || !std::isfinite(eta)) {
    return absl::InvalidArgumentError(
        "tradeoff tau, gamma and eta must be finite and > 0");
  }
  if (eta + 2 * gamma > 1 + 1e-12) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "tradeoff needs eta + 2 gamma <= 1, got %.17g", eta + 2 * gamma));
  }
  for (auto [name, v] : {std::pair<const char*, double>{"eta n", eta * nn},
                         {"2 gamma n", 2 * gamma * nn}}) {
    if (std::abs(v - std::round(v)) > kIntegralSlack) {
      return absl::InvalidArgumentError(
          absl::StrFormat("tradeoff needs %s to be an integer, got %.17g",
                          name, v));
    }
  }
  if (!(p >= 0) || !std::isfinite(p)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("tradeoff max_pay must be finite and >= 0, got %.17g",
                        p));
  }
  const double bound = 0.5 - (p / tau) * gamma * nn;
  if (!(beta < bound)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "tradeoff needs beta < 1/2 - (P/tau) gamma n = %.17g, got %.17g",
        bound, beta));
  }
  if (beta < 0) {
    return absl::InvalidArgumentError("tradeoff beta must be >= 0");
  }
  return absl::OkStatus();
}

absl::StatusOr<AuditReport> AuditPaymentAccuracyTradeoff(
    const Mechanism& m, const LossModel& model, size_t n,
    const TradeoffParams& params, double mass_tol) {
  if (absl::Status s = ValidateSize(m, n); !s.ok()) return s;
  if (!model.properties().growing_with_sd) {
    return absl::FailedPreconditionError(absl::StrCat(
        "loss model ", LossKindName(model.kind()),
        " does not grow with statistical distance; use growing_sd_monotonic"));
  }
  double p = 0;
  if (params.max_pay.has_value()) {
    p = *params.max_pay;
  } else {
    absl::StatusOr<double> cap = MaxZeroValuationPayment(m, n);
    if (!cap.ok()) return cap.status();
    p = *cap;
  }
  if (absl::Status s = params.Validate(n, p); !s.ok()) return s;

  const double nn = static_cast<double>(n);
  const size_t h = static_cast<size_t>(std::llround(params.eta * nn));
  const size_t g2 = static_cast<size_t>(std::llround(2 * params.gamma * nn));
  const double gamma_n = params.gamma * nn;
  const double denom = 1 - 2 * (p / params.tau) * gamma_n - 2 * params.beta;
  const double big_l =
      std::max(p * static_cast<double>(h) / denom, params.tau);

  AuditReport report;
  report.audit = "tradeoff";
  report.mechanism = std::string(m.name());
  report.loss_model = std::string(LossKindName(model.kind()));
  HybridChain& chain = report.chain;

  std::vector<double> vals(n, 0.0);
  absl::StatusOr<InputProfile> first = PrefixProfile(n, 0, vals);
  if (!first.ok()) return first.status();
  chain.inputs.push_back(*first);
  chain.labels.push_back(HybridLabel(1, 0));
  std::vector<InputProfile> aux;
  for (size_t i = 1; i <= h + g2; ++i) {
    absl::StatusOr<InputProfile> x1 = PrefixProfile(n, i, vals);
    if (!x1.ok()) return x1.status();
    aux.push_back(*x1);
    const double vi = i <= h ? big_l : params.tau;
    vals[i - 1] = vi;
    absl::StatusOr<InputProfile> next = PrefixProfile(n, i, vals);
    if (!next.ok()) return next.status();
    chain.inputs.push_back(*next);
    chain.labels.push_back(HybridLabel(i + 1, 0));
    chain.payments.push_back(p);
    chain.thresholds.push_back(vi);
  }
  if (absl::Status s = FillDistances(m, mass_tol, chain); !s.ok()) return s;

  // Payments: finite everywhere, and at most P to the zero-valuation
  // player i in x(i,1).
  for (size_t i = 1; i <= h + g2; ++i) {
    absl::StatusOr<PremiseCheck> c =
        FinitePayments(m, aux[i - 1], HybridLabel(i, 1));
    if (!c.ok()) return c.status();
    if (c->verdict == Verdict::kPass) {
      absl::StatusOr<double> pay = m.ExpectedPayment(aux[i - 1], i - 1);
      if (!pay.ok()) return pay.status();
      c->player = i;
      c->margin = p - *pay;
      c->verdict = *pay <= p ? Verdict::kPass : Verdict::kFail;
      c->detail = absl::StrFormat("pay=%.17g; cap P=%.17g", *pay, p);
    }
    report.checks.push_back(*c);
  }
  for (size_t i = 1; i <= h + g2; ++i) {
    absl::StatusOr<PremiseCheck> c =
        TruthfulIndifferent(m, model, aux[i - 1], HybridLabel(i, 1), i - 1,
                            chain.thresholds[i - 1], mass_tol);
    if (!c.ok()) return c.status();
    report.checks.push_back(*c);
  }
  for (size_t i = 1; i <= h + g2; ++i) {
    absl::StatusOr<PremiseCheck> c =
        IndividuallyRational(m, model, chain.inputs[i], chain.labels[i], i - 1,
                             0, NeighborRelation::kMonotonic, mass_tol);
    if (!c.ok()) return c.status();
    report.checks.push_back(*c);
  }
  // Hybrid i needs Pr[H(i) outside A(i)] < beta, with
  // A(i) = (i-1-(eta+gamma)n, i-1+gamma n).
  const double eta_gamma_n = (params.eta + params.gamma) * nn;
  for (size_t k = 0; k < chain.inputs.size(); ++k) {
    absl::StatusOr<CountDistribution> law =
        m.OutputDistribution(chain.inputs[k], mass_tol);
    if (!law.ok()) return law.status();
    const double center = static_cast<double>(k);
    const AccuracyWindow w =
        AccuracyCountWindow(center - eta_gamma_n, center + gamma_n);
    Interval fail = law->ProbabilityOf(
        [&](int64_t s) { return s < w.first_ok || s > w.last_ok; });
    fail.hi = std::min(1.0, fail.hi);
    PremiseCheck c{Premise::kAccuracy, chain.labels[k], 0,
                   Verdict::kInconclusive, params.beta - fail.hi, ""};
    if (fail.hi < params.beta) {
      c.verdict = Verdict::kPass;
    } else if (fail.lo >= params.beta) {
      c.verdict = Verdict::kFail;
    }
    c.detail = absl::StrFormat(
        "Pr[outside A(%d) = (%.17g, %.17g)] = %s; beta=%.17g", k + 1,
        center - eta_gamma_n, center + gamma_n, FormatInterval(fail),
        params.beta);
    report.checks.push_back(c);
    if (k + 1 == chain.inputs.size()) {
      report.final_failure = fail;
      const double bound = 0.5 - (p / params.tau) * gamma_n;
      if (fail.lo >= bound) report.certified_beta_sup = bound;
    }
  }
  Conclude(report);

  double total = 0;
  for (const Interval& d : chain.step_distances) total += d.hi;
  report.notes.push_back(absl::StrFormat(
      "P = %.17g, h = %d, 2 gamma n = %d, L = %.17g", p, h, g2, big_l));
  report.notes.push_back(absl::StrFormat(
      "sum of step distances %.17g; end-to-end %s; premises would force "
      "< eta n P/L + 2 gamma n P/tau = %.17g <= 1 - 2 beta = %.17g",
      total, FormatInterval(chain.end_to_end),
      static_cast<double>(h) * p / big_l +
          static_cast<double>(g2) * p / params.tau,
      1 - 2 * params.beta));
  if (report.certified_beta_sup.has_value()) {
    report.notes.push_back(absl::StrFormat(
        "final hybrid fails its accuracy window with probability >= %.17g, "
        "so accuracy fails for every beta < %.17g",
        report.final_failure->lo, *report.certified_beta_sup));
  }
  return report;
}

nlohmann::ordered_json AuditToJson(const AuditReport& report) {
  using Json = nlohmann::ordered_json;
  auto interval = [](Interval v) {
    Json j;
    j["lo"] = v.lo;
    j["hi"] = v.hi;
    return j;
  };
  Json j;
  j["audit"] = report.audit;
  j["mechanism"] = report.mechanism;
  j["loss_model"] = report.loss_model;
  j["delta"] = report.delta;
  Json chain = Json::array();
  for (size_t k = 0; k < report.chain.inputs.size(); ++k) {
    Json h;
    h["label"] = report.chain.labels[k];
    h["input"] = ProfileToJson(report.chain.inputs[k]);
    if (k > 0) {
      h["step_distance"] = interval(report.chain.step_distances[k - 1]);
    }
    chain.push_back(std::move(h));
  }
  j["chain"] = std::move(chain);
  j["payments"] = report.chain.payments;
  j["thresholds"] = report.chain.thresholds;
  j["end_to_end"] = interval(report.chain.end_to_end);
  Json checks = Json::array();
  for (const PremiseCheck& c : report.checks) {
    Json e;
    e["premise"] = std::string(PremiseName(c.premise));
    e["hybrid"] = c.hybrid;
    e["player"] = c.player;
    e["verdict"] = std::string(VerdictName(c.verdict));
    e["margin"] = c.margin;
    e["detail"] = c.detail;
    checks.push_back(std::move(e));
  }
  j["checks"] = std::move(checks);
  if (std::optional<Premise> p = report.failed_premise(); p.has_value()) {
    const PremiseCheck& c = report.checks[*report.first_failure];
    Json f;
    f["premise"] = std::string(PremiseName(*p));
    f["hybrid"] = c.hybrid;
    f["player"] = c.player;
    j["first_failure"] = std::move(f);
  } else {
    j["first_failure"] = nullptr;
  }
  j["conclusion"] = std::string(ConclusionName(report.conclusion));
  j["verdict"] = std::string(VerdictName(report.verdict()));
  if (report.final_failure.has_value()) {
    j["final_failure"] = interval(*report.final_failure);
  }
  if (report.certified_beta_sup.has_value()) {
    j["certified_beta_sup"] = *report.certified_beta_sup;
  }
  j["notes"] = report.notes;
  return j;
}

std::string RenderAudit(const AuditReport& report) {
  std::string out = absl::StrFormat(
      "audit %s | mechanism %s | loss %s | delta %.6g\n", report.audit,
      report.mechanism, report.loss_model, report.delta);
  absl::StrAppend(&out, absl::StrFormat("%-10s %-28s %s\n", "hybrid",
                                        "input (bit,valuation)",
                                        "distance to previous"));
  for (size_t k = 0; k < report.chain.inputs.size(); ++k) {
    std::string dist = "-";
    if (k > 0) {
      const Interval d = report.chain.step_distances[k - 1];
      dist = absl::StrFormat("[%.6g, %.6g]", d.lo, d.hi);
    }
    absl::StrAppend(&out, absl::StrFormat(
                              "%-10s %-28s %s\n", report.chain.labels[k],
                              ProfileToString(report.chain.inputs[k]), dist));
  }
  absl::StrAppend(&out, absl::StrFormat("end-to-end distance [%.6g, %.6g]\n\n",
                                        report.chain.end_to_end.lo,
                                        report.chain.end_to_end.hi));
  absl::StrAppend(&out, absl::StrFormat("%-21s %-8s %-6s %-12s %-12s %s\n",
                                        "premise", "hybrid", "player",
                                        "verdict", "margin", "detail"));
  for (const PremiseCheck& c : report.checks) {
    absl::StrAppend(
        &out, absl::StrFormat("%-21s %-8s %-6s %-12s %-12.6g %s\n",
                              PremiseName(c.premise), c.hybrid,
                              c.player == 0 ? "-" : absl::StrCat(c.player),
                              VerdictName(c.verdict), c.margin, c.detail));
  }
  absl::StrAppend(&out, "\nconclusion: ", ConclusionName(report.conclusion));
  if (report.first_failure.has_value()) {
    const PremiseCheck& c = report.checks[*report.first_failure];
    absl::StrAppend(&out, " (first failing premise ", PremiseName(c.premise),
                    " at ", c.hybrid);
    if (c.player > 0) absl::StrAppend(&out, ", player ", c.player);
    absl::StrAppend(&out, ")");
  }
  absl::StrAppend(&out, "\n");
  for (const std::string& note : report.notes) {
    absl::StrAppend(&out, "note: ", note, "\n");
  }
  return out;
}

}  // namespace monopriv
