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

#include "monopriv/verifiers.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace monopriv {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBoundarySnap = 1e-9;
constexpr double kDpSlack = 1e-9;
// Two-sided 99% normal quantile.
constexpr double kWilsonZ = 2.5758293035489;

std::string FormatInterval(Interval v) {
  return absl::StrFormat("[%.17g, %.17g]", v.lo, v.hi);
}

Verdict UpperBoundVerdict(Interval value, double bound) {
  if (value.hi <= bound) return Verdict::kPass;
  if (value.lo > bound) return Verdict::kFail;
  return Verdict::kInconclusive;
}

// Caches Loss_i(x, v') by the declared output law for models whose loss
// depends on the declaration only through that law.
class LossCache {
 public:
  LossCache(const Mechanism& m, const LossModel& model, const InputProfile& x,
            size_t i, double mass_tol)
      : m_(m),
        model_(model),
        x_(x),
        i_(i),
        mass_tol_(mass_tol),
        by_law_(model.properties().respects_identical_output_dists &&
                m.OthersPaymentsIgnorePlayer()) {}

  bool by_law() const { return by_law_; }

  absl::StatusOr<Interval> Get(double declared,
                               const CountDistribution* law) {
    if (by_law_ && law != nullptr) {
      for (const auto& [cached_law, loss] : entries_) {
        if (cached_law == *law) return loss;
      }
    }
    absl::StatusOr<Interval> loss =
        model_.Expectation(m_, x_, i_, declared, mass_tol_);
    if (!loss.ok()) return loss.status();
    if (by_law_ && law != nullptr) entries_.emplace_back(*law, *loss);
    return loss;
  }

 private:
  const Mechanism& m_;
  const LossModel& model_;
  const InputProfile& x_;
  size_t i_;
  double mass_tol_;
  bool by_law_;
  std::vector<std::pair<CountDistribution, Interval>> entries_;
};

}  // namespace

absl::string_view VerdictName(Verdict verdict) {
  switch (verdict) {
    case Verdict::kPass:
      return "pass";
    case Verdict::kFail:
      return "fail";
    case Verdict::kInconclusive:
      return "inconclusive";
  }
  return "unknown";
}

Verdict CombineVerdicts(Verdict a, Verdict b) {
  if (a == Verdict::kFail || b == Verdict::kFail) return Verdict::kFail;
  if (a == Verdict::kInconclusive || b == Verdict::kInconclusive) {
    return Verdict::kInconclusive;
  }
  return Verdict::kPass;
}

absl::StatusOr<IrResult> CheckIr(const Mechanism& m, const LossModel& model,
                                 const InputProfile& x, size_t i,
                                 double mass_tol) {
  absl::StatusOr<double> pay = m.ExpectedPayment(x, i);
  if (!pay.ok()) return pay.status();
  absl::StatusOr<Interval> loss =
      model.Expectation(m, x, i, x[i].valuation, mass_tol);
  if (!loss.ok()) return loss.status();
  IrResult r;
  r.payment = *pay;
  r.loss = *loss;
  r.margin = *pay - loss->hi;
  if (*pay >= loss->hi) {
    r.verdict = Verdict::kPass;
  } else if (*pay < loss->lo) {
    r.verdict = Verdict::kFail;
  } else {
    r.verdict = Verdict::kInconclusive;
  }
  r.witness = absl::StrFormat("pay=%.17g; loss=%s", *pay,
                              FormatInterval(*loss));
  return r;
}

std::vector<double> DefaultDeviations(const Mechanism& m,
                                      const InputProfile& x, size_t i,
                                      std::span<const double> extras) {
  std::vector<double> out = m.CanonicalDeclarations(x, i);
  for (double v : extras) {
    if (std::isfinite(v)) out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

absl::StatusOr<TruthfulResult> CheckTruthful(const Mechanism& m,
                                             const LossModel& model,
                                             const InputProfile& x, size_t i,
                                             std::span<const double> deviations,
                                             double mass_tol) {
  if (absl::Status s = m.ValidatePlayer(x, i); !s.ok()) return s;
  if (deviations.empty()) {
    return absl::InvalidArgumentError("deviation list is empty");
  }
  const double v = x[i].valuation;
  absl::StatusOr<double> pay_truth = m.ExpectedPayment(x, i);
  if (!pay_truth.ok()) return pay_truth.status();
  absl::StatusOr<CountDistribution> law_truth =
      m.OutputDistribution(x, mass_tol);
  if (!law_truth.ok()) return law_truth.status();
  LossCache losses(m, model, x, i, mass_tol);
  std::optional<Interval> loss_truth;

  TruthfulResult r;
  // Deviation with the largest certified gain (by lo) and with the largest
  // possible gain (by hi).
  std::optional<std::pair<double, Interval>> top_lo;
  std::optional<std::pair<double, Interval>> top_hi;
  std::optional<double> nan_deviation;
  for (double d : deviations) {
    if (!std::isfinite(d)) {
      return absl::InvalidArgumentError("deviations must be finite");
    }
    if (d == v) continue;
    const InputProfile xd = x.WithValuation(i, d);
    absl::StatusOr<double> pay_dev = m.ExpectedPayment(xd, i);
    if (!pay_dev.ok()) return pay_dev.status();
    absl::StatusOr<CountDistribution> law_dev =
        m.OutputDistribution(xd, mass_tol);
    if (!law_dev.ok()) return law_dev.status();

    Interval gain;
    if (losses.by_law() && *law_dev == *law_truth) {
      gain = Interval::Point(*pay_dev - *pay_truth);
    } else {
      if (!loss_truth.has_value()) {
        absl::StatusOr<Interval> lt = losses.Get(v, &*law_truth);
        if (!lt.ok()) return lt.status();
        loss_truth = *lt;
      }
      absl::StatusOr<Interval> loss_dev = losses.Get(d, &*law_dev);
      if (!loss_dev.ok()) return loss_dev.status();
      gain = Interval::Point(*pay_dev - *pay_truth) - *loss_dev + *loss_truth;
    }
    if (std::isnan(gain.lo) || std::isnan(gain.hi)) {
      if (!nan_deviation.has_value()) nan_deviation = d;
      continue;
    }
    if (!top_lo.has_value() || gain.lo > top_lo->second.lo) {
      top_lo.emplace(d, gain);
    }
    if (!top_hi.has_value() || gain.hi > top_hi->second.hi) {
      top_hi.emplace(d, gain);
    }
  }

  r.best_gain = Interval::Point(0);
  if (top_lo.has_value() && top_lo->second.lo > 0) {
    r.verdict = Verdict::kFail;
    r.best_deviation = top_lo->first;
    r.best_gain = top_lo->second;
  } else if (nan_deviation.has_value()) {
    r.verdict = Verdict::kInconclusive;
    r.best_deviation = nan_deviation;
    r.best_gain = {-kInf, kInf};
  } else if (top_hi.has_value()) {
    r.verdict = top_hi->second.hi > 0 ? Verdict::kInconclusive : Verdict::kPass;
    r.best_deviation = top_hi->first;
    r.best_gain = top_hi->second;
  } else {
    r.verdict = Verdict::kPass;
  }
  r.margin = 0.0 - r.best_gain.hi;
  if (r.best_deviation.has_value()) {
    r.witness = absl::StrFormat("declare %.17g; gain=%s", *r.best_deviation,
                                FormatInterval(r.best_gain));
  } else {
    r.witness = "no deviation differs from the truth";
  }
  return r;
}

absl::Status AccuracySpec::Validate() const {
  if (!(alpha >= 0) || !(alpha_prime >= 0)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "accuracy alpha and alpha_prime must be >= 0, got ", alpha, " and ",
        alpha_prime));
  }
  if (!(beta >= 0 && beta <= 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("accuracy beta must be in [0, 1], got ", beta));
  }
  return absl::OkStatus();
}

absl::StatusOr<AccuracySpec> ThresholdAccuracySpec(const Mechanism& m,
                                                   const InputProfile& x,
                                                   double gamma_n) {
  const std::optional<double> eps = m.epsilon();
  const std::optional<double> theta = m.valuation_threshold();
  if (!eps.has_value() || !theta.has_value()) {
    return absl::FailedPreconditionError(absl::StrCat(
        m.name(), " has no privacy parameter and valuation threshold"));
  }
  if (!(gamma_n > 0) || !std::isfinite(gamma_n)) {
    return absl::InvalidArgumentError(
        absl::StrCat("gamma_n must be finite and > 0, got ", gamma_n));
  }
  const double n = static_cast<double>(x.size());
  int64_t high = 0;
  for (const PlayerType& p : x.players()) {
    if (p.bit == 1 && !(p.valuation <= *theta)) ++high;
  }
  const double eta = static_cast<double>(high) / n;
  const double gamma = gamma_n / n;
  return AccuracySpec{eta + gamma, gamma, 2.0 * std::exp(-*eps * gamma_n)};
}

AccuracyWindow AccuracyCountWindow(double lower, double upper) {
  auto snap = [](double b) -> std::optional<double> {
    const double r = std::round(b);
    if (std::abs(b - r) <= kBoundarySnap) return r;
    return std::nullopt;
  };
  AccuracyWindow w;
  const std::optional<double> lo = snap(lower);
  const std::optional<double> hi = snap(upper);
  // Open interval (lower, upper) restricted to the integers.
  w.first_ok = static_cast<int64_t>(lo ? *lo + 1 : std::ceil(lower));
  w.last_ok = static_cast<int64_t>(hi ? *hi - 1 : std::floor(upper));
  return w;
}

absl::StatusOr<AccuracyResult> CheckAccuracyExact(const Mechanism& m,
                                                  const InputProfile& x,
                                                  const AccuracySpec& spec,
                                                  double mass_tol) {
  if (absl::Status s = spec.Validate(); !s.ok()) return s;
  absl::StatusOr<CountDistribution> law = m.OutputDistribution(x, mass_tol);
  if (!law.ok()) return law.status();
  const double n = static_cast<double>(x.size());
  const double sum = static_cast<double>(x.BitSum());
  const AccuracyWindow w =
      AccuracyCountWindow(sum - spec.alpha * n, sum + spec.alpha_prime * n);
  AccuracyResult r;
  r.failure_probability = law->ProbabilityOf(
      [&](int64_t k) { return k < w.first_ok || k > w.last_ok; });
  r.failure_probability.hi = std::min(1.0, r.failure_probability.hi);
  r.verdict = UpperBoundVerdict(r.failure_probability, spec.beta);
  r.margin = spec.beta - r.failure_probability.hi;
  r.witness = absl::StrFormat("Pr[fail]=%s; beta=%.17g; ok counts %d..%d",
                              FormatInterval(r.failure_probability), spec.beta,
                              w.first_ok, w.last_ok);
  return r;
}

absl::StatusOr<AccuracyResult> CheckAccuracyMonteCarlo(
    const Mechanism& m, const InputProfile& x, const AccuracySpec& spec,
    int64_t trials, uint64_t seed) {
  if (absl::Status s = spec.Validate(); !s.ok()) return s;
  if (trials < 1) {
    return absl::InvalidArgumentError("Monte Carlo trials must be >= 1");
  }
  const double n = static_cast<double>(x.size());
  const double sum = static_cast<double>(x.BitSum());
  const AccuracyWindow w =
      AccuracyCountWindow(sum - spec.alpha * n, sum + spec.alpha_prime * n);
  std::mt19937_64 seeds(seed);
  int64_t failures = 0;
  for (int64_t t = 0; t < trials; ++t) {
    absl::StatusOr<Outcome> o = m.Sample(x, seeds());
    if (!o.ok()) return o.status();
    if (o->count < w.first_ok || o->count > w.last_ok) ++failures;
  }
  const double nt = static_cast<double>(trials);
  const double p = static_cast<double>(failures) / nt;
  const double z2 = kWilsonZ * kWilsonZ;
  const double center = (p + z2 / (2 * nt)) / (1 + z2 / nt);
  const double half = kWilsonZ / (1 + z2 / nt) *
                      std::sqrt(p * (1 - p) / nt + z2 / (4 * nt * nt));
  AccuracyResult r;
  r.failure_probability = {std::max(0.0, center - half),
                           std::min(1.0, center + half)};
  r.verdict = UpperBoundVerdict(r.failure_probability, spec.beta);
  r.margin = spec.beta - r.failure_probability.hi;
  r.witness = absl::StrFormat(
      "%d/%d trials failed; wilson99=%s; beta=%.17g", failures, trials,
      FormatInterval(r.failure_probability), spec.beta);
  return r;
}

absl::string_view DistinguishabilityName(Distinguishability d) {
  switch (d) {
    case Distinguishability::kDistinguishable:
      return "distinguishable";
    case Distinguishability::kNotDistinguishable:
      return "not_distinguishable";
    case Distinguishability::kInconclusive:
      return "inconclusive";
  }
  return "unknown";
}

absl::StatusOr<DistinguishabilityResult> CheckDistinguishable(
    const Mechanism& m, const InputProfile& x,
    const DistinguishabilityQuery& q, double mass_tol) {
  if (!(q.delta > 0) || std::isnan(q.delta)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must be > 0, got ", q.delta));
  }
  absl::StatusOr<std::vector<NeighborDistance>> distances =
      NeighborOutputDistances(m, x, q.player, q.relation, mass_tol);
  if (!distances.ok()) return distances.status();
  DistinguishabilityResult r;
  const NeighborDistance* by_lo = nullptr;
  const NeighborDistance* by_hi = nullptr;
  for (const NeighborDistance& d : *distances) {
    if (by_lo == nullptr || d.distance.lo > by_lo->distance.lo) by_lo = &d;
    if (by_hi == nullptr || d.distance.hi > by_hi->distance.hi) by_hi = &d;
  }
  if (by_lo == nullptr) return r;
  if (by_lo->distance.lo >= q.delta) {
    r.outcome = Distinguishability::kDistinguishable;
    r.witness = *by_lo;
  } else if (by_hi->distance.hi < q.delta) {
    r.outcome = Distinguishability::kNotDistinguishable;
    r.witness = *by_hi;
  } else {
    r.outcome = Distinguishability::kInconclusive;
    r.witness = *by_hi;
    // Truncation slack scales with mass_tol; shrink it below the gap that
    // separates the point estimate from delta.
    const Interval d = by_hi->distance;
    const double mid = 0.5 * (d.lo + d.hi);
    const double gap = std::abs(q.delta - mid);
    const double width = std::max(d.width(), mass_tol);
    r.suggested_mass_tol =
        std::max(mass_tol * std::min(0.5, 0.5 * gap / width), 1e-300);
  }
  return r;
}

absl::StatusOr<DpResult> CheckDpLevel(const Mechanism& m,
                                      const InputProfile& x, size_t i,
                                      double epsilon, double mass_tol) {
  if (absl::Status s = m.ValidatePlayer(x, i); !s.ok()) return s;
  const double tol = std::min(mass_tol, kDpLevelMaxTruncation);
  absl::StatusOr<CountDistribution> base = m.OutputDistribution(x, tol);
  if (!base.ok()) return base.status();
  absl::StatusOr<std::vector<InputProfile>> neighbors = NeighborProfiles(
      x, i, NeighborRelation::kGeneral, m.CandidateTypes(x, i));
  if (!neighbors.ok()) return neighbors.status();
  DpResult r;
  std::optional<PlayerType> worst;
  for (const InputProfile& y : *neighbors) {
    absl::StatusOr<CountDistribution> law = m.OutputDistribution(y, tol);
    if (!law.ok()) return law.status();
    absl::StatusOr<double> level = DpLevel(*base, *law);
    if (!level.ok()) return level.status();
    if (!worst.has_value() || *level > r.level) {
      r.level = *level;
      worst = y[i];
    }
  }
  r.verdict = r.level <= epsilon + kDpSlack ? Verdict::kPass : Verdict::kFail;
  r.margin = r.level == kInf ? -kInf : epsilon - r.level;
  r.witness = worst.has_value()
                  ? absl::StrFormat("neighbor %s; level=%.17g",
                                    ToString(*worst), r.level)
                  : "no admissible neighbor";
  return r;
}

}  // namespace monopriv
