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

#include "monopriv/mechanisms.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "json_fields.h"

namespace monopriv {
namespace {

using internal::Json;

// Types whose law class depends only on the bit: both bits at zero valuation
// and at the player's own valuation.
std::vector<PlayerType> BitOnlyCandidates(const InputProfile& x, size_t i) {
  const double v = x[i].valuation;
  std::vector<PlayerType> out = {{0, 0.0}, {1, 0.0}};
  if (v != 0) {
    out.push_back({0, v});
    out.push_back({1, v});
  }
  return out;
}

}  // namespace

absl::Status BudgetParams::Validate() const {
  if (!std::isfinite(budget) || budget <= 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("budget must be finite and > 0, got ", budget));
  }
  if (!std::isfinite(epsilon) || epsilon <= 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be finite and > 0, got ", epsilon));
  }
  if (n < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("player count must be >= 1, got ", n));
  }
  const double t = threshold();
  if (!std::isfinite(t) || t <= 0 || per_player_pay() <= 0) {
    return absl::InvalidArgumentError(
        "threshold B/(2 epsilon n) must be finite and positive");
  }
  return absl::OkStatus();
}

absl::StatusOr<MonotonicMechanism> MonotonicMechanism::Create(
    BudgetParams params, Variant variant) {
  if (absl::Status s = params.Validate(); !s.ok()) return s;
  absl::StatusOr<GeomParams> geom = GeomParams::Create(params.epsilon);
  if (!geom.ok()) return geom.status();
  return MonotonicMechanism(params, variant, *geom);
}

absl::string_view MonotonicMechanism::name() const {
  return variant_ == Variant::kStandard ? "alg1" : "alg1_prime";
}

double MonotonicMechanism::AboveThreshold() const {
  return std::nextafter(params_.threshold(),
                        std::numeric_limits<double>::infinity());
}

absl::StatusOr<int64_t> MonotonicMechanism::CountedBits(
    const InputProfile& x) const {
  if (absl::Status s = ValidateProfile(x); !s.ok()) return s;
  int64_t sum = 0;
  for (const PlayerType& p : x.players()) {
    if (Included(p.valuation)) sum += p.bit;
  }
  return sum;
}

absl::StatusOr<CountDistribution> MonotonicMechanism::OutputDistribution(
    const InputProfile& x, double mass_tol) const {
  absl::StatusOr<int64_t> shift = CountedBits(x);
  if (!shift.ok()) return shift.status();
  return ShiftedGeomDist(geom_, *shift, mass_tol);
}

absl::StatusOr<double> MonotonicMechanism::ExpectedPayment(
    const InputProfile& x, size_t i) const {
  if (absl::Status s = ValidatePlayer(x, i); !s.ok()) return s;
  const bool paid = Included(x[i].valuation) ||
                    (variant_ == Variant::kPayZeroBits && x[i].bit == 0);
  return paid ? params_.per_player_pay() : 0.0;
}

absl::StatusOr<Outcome> MonotonicMechanism::Sample(const InputProfile& x,
                                                   uint64_t seed) const {
  absl::StatusOr<int64_t> shift = CountedBits(x);
  if (!shift.ok()) return shift.status();
  std::mt19937_64 rng(seed);
  Outcome out;
  out.count = *shift + SampleGeom(geom_, rng);
  out.payments.reserve(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    out.payments.push_back(*ExpectedPayment(x, i));
  }
  return out;
}

std::vector<PlayerType> MonotonicMechanism::CandidateTypes(
    const InputProfile& x, size_t i) const {
  // The law depends on player i only through (bit, Included(valuation)).
  // Each valuation below represents one inclusion class; the x-relative ones
  // keep a representative inside every monotonic half-line {w <= v} or
  // {w >= v} that meets the class.
  const double theta = params_.threshold();
  const double above = AboveThreshold();
  const double v = i < x.size() ? x[i].valuation : 0.0;
  const double valuations[] = {0.0, above, theta, v, std::min(v, theta),
                               std::max(v, above)};
  std::vector<PlayerType> out;
  for (int bit : {0, 1}) {
    for (double w : valuations) {
      const PlayerType t{bit, w};
      if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
    }
  }
  return out;
}

nlohmann::ordered_json MonotonicMechanism::ParamsJson() const {
  Json j;
  j["budget"] = params_.budget;
  j["epsilon"] = params_.epsilon;
  j["n"] = params_.n;
  return j;
}

absl::Status SubsampleParams::Validate() const {
  if (!std::isfinite(flat_pay) || flat_pay < 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("flat pay must be finite and >= 0, got ", flat_pay));
  }
  if (sample_size < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("sample size must be >= 1, got ", sample_size));
  }
  if (std::isnan(distinguishability_budget) ||
      (std::isfinite(distinguishability_budget) &&
       !(static_cast<double>(sample_size) < distinguishability_budget))) {
    return absl::InvalidArgumentError(absl::StrCat(
        "sample size ", sample_size,
        " must be below the distinguishability budget ",
        distinguishability_budget));
  }
  return absl::OkStatus();
}

int64_t RoundHalfEven(int64_t num, int64_t den) {
  const int64_t q = num / den;
  const int64_t r = num % den;
  if (2 * r > den) return q + 1;
  if (2 * r == den) return q + (q & 1);
  return q;
}

absl::StatusOr<SubsampleMechanism> SubsampleMechanism::Create(
    SubsampleParams params) {
  if (absl::Status s = params.Validate(); !s.ok()) return s;
  return SubsampleMechanism(params);
}

absl::StatusOr<CountDistribution> SubsampleMechanism::OutputDistribution(
    const InputProfile& x, double /*mass_tol*/) const {
  const int64_t n = static_cast<int64_t>(x.size());
  const int64_t k = params_.sample_size;
  if (k > n) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "sample size %d exceeds player count %d", k, n));
  }
  const int64_t ones = x.BitSum();
  // Hypergeometric law of the number m of ones in the sample, built from the
  // mode outward with ratio recurrences so no weight exceeds 1.
  const int64_t m_lo = std::max<int64_t>(0, k - (n - ones));
  const int64_t m_hi = std::min(k, ones);
  const int64_t mode =
      std::clamp<int64_t>((k + 1) * (ones + 1) / (n + 2), m_lo, m_hi);
  std::vector<double> weight(static_cast<size_t>(m_hi - m_lo + 1), 0.0);
  auto at = [&](int64_t m) -> double& {
    return weight[static_cast<size_t>(m - m_lo)];
  };
  at(mode) = 1.0;
  for (int64_t m = mode; m < m_hi; ++m) {
    at(m + 1) = at(m) * static_cast<double>((ones - m) * (k - m)) /
                static_cast<double>((m + 1) * (n - ones - k + m + 1));
  }
  for (int64_t m = mode; m > m_lo; --m) {
    at(m - 1) = at(m) * static_cast<double>(m * (n - ones - k + m)) /
                static_cast<double>((ones - m + 1) * (k - m + 1));
  }
  const double total = std::accumulate(weight.begin(), weight.end(), 0.0);

  const int64_t c_lo = RoundHalfEven(n * m_lo, k);
  const int64_t c_hi = RoundHalfEven(n * m_hi, k);
  std::vector<double> probs(static_cast<size_t>(c_hi - c_lo + 1), 0.0);
  for (int64_t m = m_lo; m <= m_hi; ++m) {
    probs[static_cast<size_t>(RoundHalfEven(n * m, k) - c_lo)] +=
        at(m) / total;
  }
  return CountDistribution::Create(c_lo, std::move(probs), 0.0);
}

absl::StatusOr<double> SubsampleMechanism::ExpectedPayment(
    const InputProfile& x, size_t i) const {
  if (absl::Status s = ValidatePlayer(x, i); !s.ok()) return s;
  return params_.flat_pay;
}

absl::StatusOr<Outcome> SubsampleMechanism::Sample(const InputProfile& x,
                                                   uint64_t seed) const {
  const int64_t n = static_cast<int64_t>(x.size());
  const int64_t k = params_.sample_size;
  if (k > n) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "sample size %d exceeds player count %d", k, n));
  }
  std::mt19937_64 rng(seed);
  std::vector<size_t> order(x.size());
  std::iota(order.begin(), order.end(), size_t{0});
  int64_t ones = 0;
  // Partial Fisher-Yates: the first k slots form a uniform size-k subset.
  for (int64_t j = 0; j < k; ++j) {
    std::uniform_int_distribution<size_t> pick(static_cast<size_t>(j),
                                               x.size() - 1);
    std::swap(order[static_cast<size_t>(j)], order[pick(rng)]);
    ones += x[order[static_cast<size_t>(j)]].bit;
  }
  Outcome out;
  out.count = RoundHalfEven(n * ones, k);
  out.payments.assign(x.size(), params_.flat_pay);
  return out;
}

std::vector<PlayerType> SubsampleMechanism::CandidateTypes(
    const InputProfile& x, size_t i) const {
  return BitOnlyCandidates(x, i);
}

nlohmann::ordered_json SubsampleMechanism::ParamsJson() const {
  Json j;
  j["flat_pay"] = params_.flat_pay;
  j["sample_size"] = params_.sample_size;
  if (std::isfinite(params_.distinguishability_budget)) {
    j["distinguishability_budget"] = params_.distinguishability_budget;
  }
  return j;
}

absl::StatusOr<PayDeclaredMechanism> PayDeclaredMechanism::Create(
    double epsilon) {
  absl::StatusOr<GeomParams> geom = GeomParams::Create(epsilon);
  if (!geom.ok()) return geom.status();
  return PayDeclaredMechanism(*geom);
}

absl::StatusOr<CountDistribution> PayDeclaredMechanism::OutputDistribution(
    const InputProfile& x, double mass_tol) const {
  return ShiftedGeomDist(geom_, x.BitSum(), mass_tol);
}

absl::StatusOr<double> PayDeclaredMechanism::ExpectedPayment(
    const InputProfile& x, size_t i) const {
  if (absl::Status s = ValidatePlayer(x, i); !s.ok()) return s;
  return x[i].valuation * geom_.epsilon();
}

absl::StatusOr<Outcome> PayDeclaredMechanism::Sample(const InputProfile& x,
                                                     uint64_t seed) const {
  std::mt19937_64 rng(seed);
  Outcome out;
  out.count = x.BitSum() + SampleGeom(geom_, rng);
  for (const PlayerType& p : x.players()) {
    out.payments.push_back(p.valuation * geom_.epsilon());
  }
  return out;
}

std::vector<PlayerType> PayDeclaredMechanism::CandidateTypes(
    const InputProfile& x, size_t i) const {
  return BitOnlyCandidates(x, i);
}

nlohmann::ordered_json PayDeclaredMechanism::ParamsJson() const {
  Json j;
  j["epsilon"] = geom_.epsilon();
  return j;
}

absl::StatusOr<ExactSumMechanism> ExactSumMechanism::Create(double flat_pay) {
  if (!std::isfinite(flat_pay) || flat_pay < 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("flat pay must be finite and >= 0, got ", flat_pay));
  }
  return ExactSumMechanism(flat_pay);
}

absl::StatusOr<CountDistribution> ExactSumMechanism::OutputDistribution(
    const InputProfile& x, double /*mass_tol*/) const {
  return CountDistribution::PointMass(x.BitSum());
}

absl::StatusOr<double> ExactSumMechanism::ExpectedPayment(
    const InputProfile& x, size_t i) const {
  if (absl::Status s = ValidatePlayer(x, i); !s.ok()) return s;
  return flat_pay_;
}

absl::StatusOr<Outcome> ExactSumMechanism::Sample(const InputProfile& x,
                                                  uint64_t /*seed*/) const {
  return Outcome{x.BitSum(), std::vector<double>(x.size(), flat_pay_)};
}

std::vector<PlayerType> ExactSumMechanism::CandidateTypes(
    const InputProfile& x, size_t i) const {
  return BitOnlyCandidates(x, i);
}

nlohmann::ordered_json ExactSumMechanism::ParamsJson() const {
  Json j;
  j["flat_pay"] = flat_pay_;
  return j;
}

absl::StatusOr<CountDistribution> ConstantMechanism::OutputDistribution(
    const InputProfile& /*x*/, double /*mass_tol*/) const {
  return CountDistribution::PointMass(output_);
}

absl::StatusOr<double> ConstantMechanism::ExpectedPayment(
    const InputProfile& x, size_t i) const {
  if (absl::Status s = ValidatePlayer(x, i); !s.ok()) return s;
  return 0.0;
}

absl::StatusOr<Outcome> ConstantMechanism::Sample(const InputProfile& x,
                                                  uint64_t /*seed*/) const {
  return Outcome{output_, std::vector<double>(x.size(), 0.0)};
}

std::vector<PlayerType> ConstantMechanism::CandidateTypes(
    const InputProfile& x, size_t i) const {
  return BitOnlyCandidates(x, i);
}

nlohmann::ordered_json ConstantMechanism::ParamsJson() const {
  Json j;
  j["output"] = output_;
  return j;
}

absl::StatusOr<std::unique_ptr<Mechanism>> MakeMechanism(
    absl::string_view name, const nlohmann::ordered_json& params) {
  using internal::ReadInteger;
  using internal::ReadNumber;
  const std::string path = absl::StrCat("params.", name, ".");
  if (!params.is_null() && !params.is_object()) {
    return internal::FieldError(absl::StrCat("params.", name),
                                "expected an object");
  }
  if (name == "alg1" || name == "alg1_prime") {
    BudgetParams b;
    absl::StatusOr<double> budget = ReadNumber(params, "budget", path);
    if (!budget.ok()) return budget.status();
    absl::StatusOr<double> eps = ReadNumber(params, "epsilon", path);
    if (!eps.ok()) return eps.status();
    absl::StatusOr<int64_t> n = ReadInteger(params, "n", path);
    if (!n.ok()) return n.status();
    b = {*budget, *eps, *n};
    absl::StatusOr<MonotonicMechanism> m = MonotonicMechanism::Create(
        b, name == "alg1" ? MonotonicMechanism::Variant::kStandard
                          : MonotonicMechanism::Variant::kPayZeroBits);
    if (!m.ok()) return internal::WithPath(m.status(), path);
    return std::make_unique<MonotonicMechanism>(*std::move(m));
  }
  if (name == "subsample") {
    SubsampleParams p;
    absl::StatusOr<double> pay = ReadNumber(params, "flat_pay", path, 0.0);
    if (!pay.ok()) return pay.status();
    absl::StatusOr<int64_t> k = ReadInteger(params, "sample_size", path);
    if (!k.ok()) return k.status();
    absl::StatusOr<double> c =
        ReadNumber(params, "distinguishability_budget", path,
                   std::numeric_limits<double>::infinity());
    if (!c.ok()) return c.status();
    p = {*pay, *k, *c};
    absl::StatusOr<SubsampleMechanism> m = SubsampleMechanism::Create(p);
    if (!m.ok()) return internal::WithPath(m.status(), path);
    return std::make_unique<SubsampleMechanism>(*std::move(m));
  }
  if (name == "pay_declared") {
    absl::StatusOr<double> eps = ReadNumber(params, "epsilon", path);
    if (!eps.ok()) return eps.status();
    absl::StatusOr<PayDeclaredMechanism> m = PayDeclaredMechanism::Create(*eps);
    if (!m.ok()) return internal::WithPath(m.status(), path);
    return std::make_unique<PayDeclaredMechanism>(*std::move(m));
  }
  if (name == "exact_sum") {
    absl::StatusOr<double> pay = ReadNumber(params, "flat_pay", path, 0.0);
    if (!pay.ok()) return pay.status();
    absl::StatusOr<ExactSumMechanism> m = ExactSumMechanism::Create(*pay);
    if (!m.ok()) return internal::WithPath(m.status(), path);
    return std::make_unique<ExactSumMechanism>(*std::move(m));
  }
  if (name == "constant") {
    absl::StatusOr<int64_t> out = ReadInteger(params, "output", path, 0);
    if (!out.ok()) return out.status();
    return std::make_unique<ConstantMechanism>(*out);
  }
  return internal::FieldError(
      "mechanism",
      absl::StrCat("unknown mechanism \"", name,
                   "\" (expected alg1, alg1_prime, subsample, pay_declared, "
                   "exact_sum or constant)"));
}

}  // namespace monopriv
