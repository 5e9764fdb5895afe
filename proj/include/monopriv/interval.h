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

#ifndef MONOPRIV_INTERVAL_H_
#define MONOPRIV_INTERVAL_H_

namespace monopriv {

// Closed enclosure [lo, hi] of a real quantity that is only known up to a
// certified truncation error. lo <= hi always holds for constructed values.
struct Interval {
  double lo = 0;
  double hi = 0;

  static Interval Point(double x) { return {x, x}; }

  double width() const { return hi - lo; }
  bool Contains(double x) const { return lo <= x && x <= hi; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

inline Interval operator+(Interval a, Interval b) {
  return {a.lo + b.lo, a.hi + b.hi};
}

inline Interval operator-(Interval a, Interval b) {
  return {a.lo - b.hi, a.hi - b.lo};
}

// Scales by a real factor, flipping the bounds for negative factors.
inline Interval operator*(double c, Interval a) {
  if (c >= 0) return {c * a.lo, c * a.hi};
  return {c * a.hi, c * a.lo};
}

}  // namespace monopriv

#endif  // MONOPRIV_INTERVAL_H_
