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

#include "monopriv/geometric.h"

#include <cassert>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace monopriv {
namespace {

// Windows wider than this are refused rather than allocated.
constexpr int64_t kMaxWindowRadius = int64_t{1} << 22;

// Pr[|X| > t] = 2 a^(t+1) / (1 + a).
double TailBeyond(const GeomParams& g, int64_t t) {
  return 2.0 * std::exp(-g.epsilon() * static_cast<double>(t + 1)) /
         (1.0 + g.decay());
}

}  // namespace

GeomParams::GeomParams(double epsilon)
    : epsilon_(epsilon), decay_(std::exp(-epsilon)) {}

absl::StatusOr<GeomParams> GeomParams::Create(double epsilon) {
  if (!std::isfinite(epsilon) || epsilon <= 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be finite and > 0, got ", epsilon));
  }
  return GeomParams(epsilon);
}

double GeomPmf(const GeomParams& g, int64_t k) {
  // (1 - a) / (1 + a) == tanh(epsilon / 2), without the cancellation.
  return std::tanh(0.5 * g.epsilon()) *
         std::exp(-g.epsilon() * static_cast<double>(std::llabs(k)));
}

absl::StatusOr<double> GeomTail(const GeomParams& g, int64_t t) {
  if (t < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("tail radius must be >= 1, got ", t));
  }
  const double tail = TailBeyond(g, t - 1);
  assert(tail < 2.0 * std::exp(-g.epsilon() * static_cast<double>(t)));
  return tail;
}

int64_t GeomWindowRadius(const GeomParams& g, double mass_tol) {
  const double estimate =
      std::ceil(std::log(mass_tol * (1.0 + g.decay()) / 2.0) / -g.epsilon()) -
      1.0;
  int64_t t = estimate < 0 ? 0
              : estimate > static_cast<double>(kMaxWindowRadius)
                  ? kMaxWindowRadius + 1
                  : static_cast<int64_t>(estimate);
  while (t > 0 && TailBeyond(g, t - 1) <= mass_tol) --t;
  while (t <= kMaxWindowRadius && TailBeyond(g, t) > mass_tol) ++t;
  return t;
}

absl::StatusOr<CountDistribution> ShiftedGeomDist(const GeomParams& g,
                                                  int64_t shift,
                                                  double mass_tol) {
  if (!(mass_tol > 0 && mass_tol < 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("mass_tol must be in (0, 1), got ", mass_tol));
  }
  const int64_t t = GeomWindowRadius(g, mass_tol);
  if (t > kMaxWindowRadius) {
    return absl::ResourceExhaustedError(absl::StrFormat(
        "epsilon %g with mass_tol %g needs a window wider than %d atoms",
        g.epsilon(), mass_tol, 2 * kMaxWindowRadius + 1));
  }
  std::vector<double> probs(static_cast<size_t>(2 * t + 1));
  for (int64_t k = -t; k <= t; ++k) {
    probs[static_cast<size_t>(k + t)] = GeomPmf(g, k);
  }
  return CountDistribution::Create(shift - t, std::move(probs),
                                   TailBeyond(g, t));
}

int64_t SampleGeom(const GeomParams& g, std::mt19937_64& rng) {
  // w is uniform on (0, 1]; |X| = m exactly when
  // Pr[|X| > m] < w <= Pr[|X| > m - 1], i.e. m = floor(r) below.
  const double w = (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
  const double r = std::log(w * (1.0 + g.decay()) / 2.0) / -g.epsilon();
  const int64_t magnitude = r < 1.0 ? 0 : static_cast<int64_t>(std::floor(r));
  if (magnitude == 0) return 0;
  return (rng() & 1) ? magnitude : -magnitude;
}

}  // namespace monopriv
