// Copyright 2026 The teleportsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <numbers>

namespace teleportsim {

inline constexpr double kPi = std::numbers::pi;

// Shared tolerances. Every module reads its thresholds from here so that a
// change of policy happens in exactly one place.
namespace tol {
inline constexpr double kNormalization = 1e-12;   // |<v|v> - 1| for states
inline constexpr double kUnitarity = 1e-10;       // ||M^dag M - I||_max
inline constexpr double kChannelInput = 1e-9;     // make_channel normalization slack
inline constexpr double kCapability = 1e-12;      // max a_j^2 <= 1/2 + slack
inline constexpr double kNegativeEigen = 1e-10;   // PSD check for density matrices
inline constexpr double kHermitian = 1e-10;
inline constexpr double kEntropyDomain = 1e-12;   // binary_entropy argument slack
inline constexpr double kResidual = 1e-12;        // constraint residuals
inline constexpr double kTriangle = 1e-12;        // phasor triangle inequality
inline constexpr double kDegenerate = 1e-13;      // "free parameter" detection
inline constexpr double kCorrectable = 1e-9;      // conditions (i)/(ii) for W
inline constexpr double kUnreachable = 1e-14;     // branch probability treated as zero
inline constexpr double kArccos = 1e-12;          // arccos argument slack
}  // namespace tol

// Closed interval of real numbers. Degenerate intervals (lo == hi) are used
// for isolated admissible points.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  [[nodiscard]] bool contains(double x, double slack = 0.0) const {
    return x >= lo - slack && x <= hi + slack;
  }
  [[nodiscard]] double width() const { return hi - lo; }
};

// arccos with a small tolerance for arguments pushed just outside [-1, 1] by
// rounding. Returns NaN when the argument is genuinely out of range.
inline double clamped_acos(double x, double slack = tol::kArccos) {
  if (x > 1.0 + slack || x < -1.0 - slack || std::isnan(x)) return std::nan("");
  if (x > 1.0) x = 1.0;
  if (x < -1.0) x = -1.0;
  return std::acos(x);
}

}  // namespace teleportsim
