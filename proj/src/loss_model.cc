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

#include "monopriv/loss_model.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "json_fields.h"

namespace monopriv {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Laws needed to evaluate the tight per-outcome loss for player i: the law
// under the true profile and the distinct laws of its admissible neighbors.
struct TightDpLaws {
  CountDistribution truth;
  std::vector<CountDistribution> neighbors;
};

absl::StatusOr<TightDpLaws> BuildTightDpLaws(const Mechanism& m,
                                             NeighborRelation relation,
                                             const InputProfile& x, size_t i,
                                             double mass_tol) {
  if (absl::Status s = m.ValidatePlayer(x, i); !s.ok()) return s;
  if (!m.OthersPaymentsIgnorePlayer()) {
    return absl::UnimplementedError(absl::StrCat(
        "tight dp loss needs payments to others independent of player i; ",
        m.name(), " does not guarantee that"));
  }
  absl::StatusOr<CountDistribution> truth = m.OutputDistribution(x, mass_tol);
  if (!truth.ok()) return truth.status();
  absl::StatusOr<std::vector<InputProfile>> profiles =
      NeighborProfiles(x, i, relation, m.CandidateTypes(x, i));
  if (!profiles.ok()) return profiles.status();
  TightDpLaws laws{*std::move(truth), {}};
  for (const InputProfile& y : *profiles) {
    absl::StatusOr<CountDistribution> law = m.OutputDistribution(y, mass_tol);
    if (!law.ok()) return law.status();
    if (std::find(laws.neighbors.begin(), laws.neighbors.end(), *law) ==
        laws.neighbors.end()) {
      laws.neighbors.push_back(*std::move(law));
    }
  }
  return laws;
}

// max_c ln(truth(s) / neighbor_c(s)); nullopt if any probability involved is
// unknown. Neighbors with 0/0 at s carry no information and are skipped; no
// informative neighbor gives 0.
std::optional<double> MaxLogRatio(const TightDpLaws& laws, int64_t s) {
  const std::optional<double> d = laws.truth.KnownProbability(s);
  if (!d.has_value()) return std::nullopt;
  double best = -kInf;
  bool any = false;
  for (const CountDistribution& law : laws.neighbors) {
    const std::optional<double> q = law.KnownProbability(s);
    if (!q.has_value()) return std::nullopt;
    if (*d == 0 && *q == 0) continue;
    double r;
    if (*d == 0) {
      r = -kInf;
    } else if (*q == 0) {
      r = kInf;
    } else {
      r = std::log(*d) - std::log(*q);
    }
    best = std::max(best, r);
    any = true;
  }
  return any ? best : 0.0;
}

double ScaleByValuation(double valuation, double log_ratio) {
  if (valuation == 0) return 0;
  return valuation * log_ratio;
}

class ZeroLoss final : public LossModel {
 public:
  LossKind kind() const override { return LossKind::kZero; }
  LossProperties properties() const override {
    LossProperties p;
    p.respects_indifference = true;
    p.respects_identical_output_dists = true;
    p.bounded_by_dp = true;
    p.bounded_by_dp_monotonic = true;
    return p;
  }
  absl::StatusOr<Interval> Expectation(const Mechanism& m,
                                       const InputProfile& x, size_t i,
                                       double /*declared*/,
                                       double /*mass_tol*/) const override {
    if (absl::Status s = m.ValidatePlayer(x, i); !s.ok()) return s;
    return Interval::Point(0);
  }
};

class TightDpLoss final : public LossModel {
 public:
  explicit TightDpLoss(NeighborRelation relation) : relation_(relation) {}

  LossKind kind() const override {
    return relation_ == NeighborRelation::kGeneral
               ? LossKind::kDpBoundedGeneral
               : LossKind::kDpBoundedMonotonic;
  }

  LossProperties properties() const override {
    LossProperties p;
    p.respects_indifference = true;
    p.respects_identical_output_dists = true;
    p.bounded_by_dp = true;
    p.bounded_by_dp_monotonic = relation_ == NeighborRelation::kMonotonic;
    return p;
  }

  absl::StatusOr<Interval> Expectation(const Mechanism& m,
                                       const InputProfile& x, size_t i,
                                       double declared,
                                       double mass_tol) const override {
    if (absl::Status s = m.ValidatePlayer(x, i); !s.ok()) return s;
    if (!std::isfinite(declared)) {
      return absl::InvalidArgumentError("declared valuation must be finite");
    }
    const double v = x[i].valuation;
    if (v == 0) return Interval::Point(0);
    absl::StatusOr<TightDpLaws> laws =
        BuildTightDpLaws(m, relation_, x, i, mass_tol);
    if (!laws.ok()) return laws.status();
    absl::StatusOr<CountDistribution> declared_law =
        m.OutputDistribution(x.WithValuation(i, declared), mass_tol);
    if (!declared_law.ok()) return declared_law.status();

    double sum = 0;
    double sup = 0;
    double uncovered = declared_law->truncation_mass();
    bool pos_inf = false;
    bool neg_inf = false;
    for (int64_t s = declared_law->min_count(); s <= declared_law->max_count();
         ++s) {
      const double q = declared_law->StoredProbability(s);
      if (q == 0) continue;
      const std::optional<double> r = MaxLogRatio(*laws, s);
      if (!r.has_value()) {
        uncovered += q;
        continue;
      }
      const double lambda = ScaleByValuation(v, *r);
      if (lambda == kInf) {
        pos_inf = true;
      } else if (lambda == -kInf) {
        neg_inf = true;
      } else {
        sum += q * lambda;
        sup = std::max(sup, std::abs(lambda));
      }
    }
    if (pos_inf && neg_inf) {
      return absl::OutOfRangeError(
          "privacy loss is +infinity and -infinity on atoms of positive "
          "probability; expectation undefined");
    }
    if (pos_inf) return Interval{kInf, kInf};
    if (neg_inf) return Interval{-kInf, -kInf};
    const double slack = uncovered * sup;
    return Interval{sum - slack, sum + slack};
  }

  nlohmann::ordered_json ParamsJson() const override {
    nlohmann::ordered_json j;
    j["relation"] = std::string(RelationName(relation_));
    return j;
  }

 private:
  NeighborRelation relation_;
};

class IncreasingThresholdLoss final : public LossModel {
 public:
  IncreasingThresholdLoss(double delta, NeighborRelation relation,
                          AffineThreshold threshold)
      : delta_(delta), relation_(relation), threshold_(threshold) {}

  LossKind kind() const override { return LossKind::kIncreasingWithThreshold; }

  LossProperties properties() const override {
    LossProperties p;
    p.respects_indifference = LossValue(0) == 0;
    p.increasing_for_delta = true;
    return p;
  }

  absl::StatusOr<Interval> Expectation(const Mechanism& m,
                                       const InputProfile& x, size_t i,
                                       double declared,
                                       double mass_tol) const override {
    if (absl::Status s = m.ValidatePlayer(x, i); !s.ok()) return s;
    if (!std::isfinite(declared)) {
      return absl::InvalidArgumentError("declared valuation must be finite");
    }
    absl::StatusOr<std::vector<NeighborDistance>> distances =
        NeighborOutputDistances(m, x.WithValuation(i, declared), i, relation_,
                                mass_tol);
    if (!distances.ok()) return distances.status();
    bool distinguishable = false;
    bool undecided = false;
    for (const NeighborDistance& d : *distances) {
      if (d.distance.lo >= delta_) {
        distinguishable = true;
      } else if (d.distance.hi >= delta_) {
        undecided = true;
      }
    }
    const double value = LossValue(x[i].valuation);
    if (distinguishable) return Interval::Point(value);
    if (undecided) return Interval{0.0, value};
    return Interval::Point(0);
  }

  std::optional<double> Threshold(double ell, const InputProfile& /*x*/,
                                  size_t /*i*/) const override {
    return threshold_(ell);
  }

  nlohmann::ordered_json ParamsJson() const override {
    nlohmann::ordered_json j;
    j["delta"] = delta_;
    j["relation"] = std::string(RelationName(relation_));
    j["threshold_slope"] = threshold_.slope;
    j["threshold_offset"] = threshold_.offset;
    return j;
  }

 private:
  // Smallest-form loss exceeding every l with T(l) <= v.
  double LossValue(double v) const {
    return std::max(0.0, (v - threshold_.offset) / threshold_.slope + 1.0);
  }

  double delta_;
  NeighborRelation relation_;
  AffineThreshold threshold_;
};

class GrowingSdLossModel final : public LossModel {
 public:
  LossKind kind() const override { return LossKind::kGrowingSdMonotonic; }

  LossProperties properties() const override {
    LossProperties p;
    p.respects_indifference = true;
    p.respects_identical_output_dists = true;
    p.growing_with_sd = true;
    return p;
  }

  absl::StatusOr<Interval> Expectation(const Mechanism& m,
                                       const InputProfile& x, size_t i,
                                       double declared,
                                       double mass_tol) const override {
    if (absl::Status s = m.ValidatePlayer(x, i); !s.ok()) return s;
    const double v = x[i].valuation;
    if (v == 0) return Interval::Point(0);
    absl::StatusOr<CountDistribution> declared_law =
        m.OutputDistribution(x.WithValuation(i, declared), mass_tol);
    if (!declared_law.ok()) return declared_law.status();
    absl::StatusOr<std::vector<InputProfile>> neighbors = NeighborProfiles(
        x, i, NeighborRelation::kMonotonic, m.CandidateTypes(x, i));
    if (!neighbors.ok()) return neighbors.status();
    Interval best = Interval::Point(0);
    for (const InputProfile& y : *neighbors) {
      absl::StatusOr<CountDistribution> law = m.OutputDistribution(y, mass_tol);
      if (!law.ok()) return law.status();
      const Interval d = OutputLawDistance(*declared_law, *law);
      best.lo = std::max(best.lo, d.lo);
      best.hi = std::max(best.hi, d.hi);
    }
    return v * best;
  }
};

}  // namespace

absl::string_view LossKindName(LossKind kind) {
  switch (kind) {
    case LossKind::kZero:
      return "zero";
    case LossKind::kDpBoundedGeneral:
      return "dp_bounded_general";
    case LossKind::kDpBoundedMonotonic:
      return "dp_bounded_monotonic";
    case LossKind::kGrowingSdMonotonic:
      return "growing_sd_monotonic";
    case LossKind::kIncreasingWithThreshold:
      return "increasing_with_threshold";
  }
  return "unknown";
}

absl::Status AffineThreshold::Validate() const {
  if (!std::isfinite(slope) || slope <= 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("threshold slope must be finite and > 0, got ", slope));
  }
  if (!std::isfinite(offset)) {
    return absl::InvalidArgumentError("threshold offset must be finite");
  }
  return absl::OkStatus();
}

std::unique_ptr<LossModel> MakeZeroLoss() {
  return std::make_unique<ZeroLoss>();
}

std::unique_ptr<LossModel> MakeTightDpLoss(NeighborRelation relation) {
  return std::make_unique<TightDpLoss>(relation);
}

absl::StatusOr<std::optional<double>> TightDpLossAt(const Mechanism& m,
                                                    NeighborRelation relation,
                                                    const InputProfile& x,
                                                    size_t i, int64_t s,
                                                    double mass_tol) {
  absl::StatusOr<TightDpLaws> laws =
      BuildTightDpLaws(m, relation, x, i, mass_tol);
  if (!laws.ok()) return laws.status();
  const std::optional<double> r = MaxLogRatio(*laws, s);
  if (!r.has_value()) return std::optional<double>();
  return std::optional<double>(ScaleByValuation(x[i].valuation, *r));
}

absl::StatusOr<std::unique_ptr<LossModel>> MakeIncreasingThresholdLoss(
    double delta, NeighborRelation relation, AffineThreshold threshold) {
  if (!(delta > 0 && delta <= 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must be in (0, 1], got ", delta));
  }
  if (absl::Status s = threshold.Validate(); !s.ok()) return s;
  return std::unique_ptr<LossModel>(
      std::make_unique<IncreasingThresholdLoss>(delta, relation, threshold));
}

std::unique_ptr<LossModel> MakeGrowingSdLoss() {
  return std::make_unique<GrowingSdLossModel>();
}

absl::StatusOr<Interval> GrowingSdLoss(const Mechanism& m,
                                       const InputProfile& x, size_t i,
                                       double mass_tol) {
  if (absl::Status s = m.ValidatePlayer(x, i); !s.ok()) return s;
  return GrowingSdLossModel().Expectation(m, x, i, x[i].valuation, mass_tol);
}

absl::StatusOr<std::unique_ptr<LossModel>> MakeLossModel(
    absl::string_view name, const nlohmann::ordered_json& params) {
  const std::string path = absl::StrCat("loss_params.", name, ".");
  if (!params.is_null() && !params.is_object()) {
    return internal::FieldError(absl::StrCat("loss_params.", name),
                                "expected an object");
  }
  if (name == "zero") return MakeZeroLoss();
  if (name == "dp_bounded_general") {
    return MakeTightDpLoss(NeighborRelation::kGeneral);
  }
  if (name == "dp_bounded_monotonic") {
    return MakeTightDpLoss(NeighborRelation::kMonotonic);
  }
  if (name == "growing_sd_monotonic") return MakeGrowingSdLoss();
  if (name == "increasing_with_threshold") {
    absl::StatusOr<double> delta = internal::ReadNumber(params, "delta", path);
    if (!delta.ok()) return delta.status();
    absl::StatusOr<std::string> rel =
        internal::ReadString(params, "relation", path, "general");
    if (!rel.ok()) return rel.status();
    absl::StatusOr<NeighborRelation> relation = ParseRelation(*rel);
    if (!relation.ok()) {
      return internal::WithPath(relation.status(),
                                absl::StrCat(path, "relation"));
    }
    AffineThreshold t;
    absl::StatusOr<double> slope =
        internal::ReadNumber(params, "threshold_slope", path, 1.0);
    if (!slope.ok()) return slope.status();
    absl::StatusOr<double> offset =
        internal::ReadNumber(params, "threshold_offset", path, 1.0);
    if (!offset.ok()) return offset.status();
    t = {*slope, *offset};
    absl::StatusOr<std::unique_ptr<LossModel>> model =
        MakeIncreasingThresholdLoss(*delta, *relation, t);
    if (!model.ok()) return internal::WithPath(model.status(), path);
    return model;
  }
  return internal::FieldError(
      "loss_model",
      absl::StrCat("unknown loss model \"", name,
                   "\" (expected zero, dp_bounded_general, "
                   "dp_bounded_monotonic, growing_sd_monotonic or "
                   "increasing_with_threshold)"));
}

}  // namespace monopriv
