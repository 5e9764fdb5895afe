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

// Two-sided (symmetric) geometric noise: integer valued with
// Pr[X = k] = ((1 - a) / (1 + a)) * a^|k|, a = exp(-epsilon).

#ifndef MONOPRIV_GEOMETRIC_H_
#define MONOPRIV_GEOMETRIC_H_

#include <cstdint>
#include <random>

#include "absl/status/statusor.h"
#include "monopriv/count_distribution.h"

namespace monopriv {

inline constexpr double kDefaultMassTol = 1e-12;

class GeomParams {
 public:
  static absl::StatusOr<GeomParams> Create(double epsilon);

  double epsilon() const { return epsilon_; }
  // exp(-epsilon).
  double decay() const { return decay_; }

 private:
  explicit GeomParams(double epsilon);

  double epsilon_;
  double decay_;
};

double GeomPmf(const GeomParams& g, int64_t k);

// Pr[|X| >= t] = 2 a^t / (1 + a). Requires t >= 1.
absl::StatusOr<double> GeomTail(const GeomParams& g, int64_t t);

// Smallest radius t >= 0 with Pr[|X| > t] = 2 a^(t+1) / (1 + a) <= mass_tol.
int64_t GeomWindowRadius(const GeomParams& g, double mass_tol);

// Law of shift + X truncated to [shift - t, shift + t] for the radius above;
// truncation_mass is the exact excluded tail 2 a^(t+1) / (1 + a).
absl::StatusOr<CountDistribution> ShiftedGeomDist(const GeomParams& g,
                                                  int64_t shift,
                                                  double mass_tol);

// Draws X by inverse CDF: the magnitude |X| from a 64-bit uniform, then an
// independent fair sign bit when the magnitude is nonzero.
int64_t SampleGeom(const GeomParams& g, std::mt19937_64& rng);

}  // namespace monopriv

#endif  // MONOPRIV_GEOMETRIC_H_
