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

// Resource quantifiers for a solved scheme: channel entanglement, average
// entanglement of Alice's basis, classical cost, plus the reference values
// and trade-off bounds they are compared against.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "teleportsim/channel.hpp"
#include "teleportsim/errors.hpp"
#include "teleportsim/numerics.hpp"
#include "teleportsim/qlinalg.hpp"
#include "teleportsim/scheme.hpp"
#include "teleportsim/teleport.hpp"

namespace teleportsim {

inline const double kLog2Of3 = std::log2(3.0);

struct ResourceReport {
  double e_channel = 0.0;
  double e12 = 0.0;
  double h12 = 0.0;
  double sum = 0.0;
  std::vector<double> tangles;
  std::vector<double> probabilities;
};

/// Sum_k P_k E(C_k) with E(C) = H((1 + sqrt(1 - C)) / 2).
inline double measurement_entanglement(std::span<const double> probabilities, std::span<const double> tangles) {
  if (probabilities.size() != tangles.size()) {
    throw ValidationError("measurement_entanglement: probability and tangle counts differ");
  }
  double e = 0.0;
  for (std::size_t k = 0; k < probabilities.size(); ++k) {
    if (probabilities[k] > 0.0) e += probabilities[k] * entanglement_from_tangle(tangles[k]);
  }
  return e;
}

inline std::vector<double> basis_tangles(const MeasurementBasis& basis) {
  std::vector<double> t;
  t.reserve(basis.size());
  for (const CVec& v : basis.vectors) t.push_back(qubit_tangle(v, basis.dims.second));
  return t;
}

inline double measurement_entanglement(const std::vector<OutcomeBranch>& branches, const MeasurementBasis& basis) {
  if (branches.size() != basis.size()) throw ValidationError("measurement_entanglement: branch count mismatch");
  std::vector<double> p;
  p.reserve(branches.size());
  for (const auto& b : branches) p.push_back(b.probability);
  const auto t = basis_tangles(basis);
  return measurement_entanglement(p, t);
}

inline double classical_cost(std::span<const double> probabilities) { return shannon_entropy(probabilities); }

/// Tangles of the six basis rows from the rotation and phases alone, in
/// label order 1+, 2+, 3+, 1-, 2-, 3-.
inline std::array<double, 6> branch_tangles(const SchemeParams& p) {
  const Rotation u = rotation_from_angles(p.theta);
  auto sq = [&](int r, int c) { return u(r, c) * u(r, c); };
  const double c1 = 4.0 * sq(0, 1) * (sq(0, 0) + sq(0, 2));
  const double c2 = 4.0 * sq(1, 1) * (sq(1, 0) + sq(1, 2));
  const double d1 = p.delta[0];
  const double d2 = p.delta[1];
  const double c3 = 2.0 * sq(2, 0) * sq(2, 1) * (1.0 - std::cos(d1)) + 2.0 * sq(2, 0) * sq(2, 2) * (1.0 - std::cos(d2)) +
                    2.0 * sq(2, 1) * sq(2, 2) * (1.0 - std::cos(d1 + d2));
  return {c1, c1, c3, c2, c2, c3};
}

/// Outcome probabilities of any qubit (x) qudit basis on a channel. They do
/// not depend on the input, so they are read off the branch structures.
inline std::vector<double> basis_probabilities(const MeasurementBasis& basis, std::span<const double> schmidt) {
  std::vector<double> p;
  for (const auto& s : branch_structures(basis, schmidt)) {
    p.push_back(0.5 * (s.phi_alpha.squaredNorm() + s.phi_beta.squaredNorm()));
  }
  return p;
}

inline ResourceReport resource_report(std::span<const double> schmidt, const MeasurementBasis& basis) {
  ResourceReport r;
  std::vector<double> sq;
  for (double a : schmidt) sq.push_back(a * a);
  r.e_channel = std::clamp(shannon_entropy(sq), 0.0, std::log2(static_cast<double>(schmidt.size())));
  r.probabilities = basis_probabilities(basis, schmidt);
  r.tangles = basis_tangles(basis);
  r.e12 = measurement_entanglement(r.probabilities, r.tangles);
  r.h12 = classical_cost(r.probabilities);
  r.sum = r.e12 + r.h12;
  return r;
}

inline ResourceReport resource_report(const SchmidtChannel& ch, const SchemeParams& params) {
  return resource_report(std::span<const double>(ch.coefficients()), measurement_basis(params));
}

// ---------------------------------------------------------------------------
// Reference protocol values.

namespace detail {

inline double checked_acos(double x, const char* what, double slack = tol::kArccos) {
  const double v = clamped_acos(x, slack);
  if (std::isnan(v)) throw DomainError(std::string(what) + ": arccos argument " + std::to_string(x) + " outside [-1, 1]");
  return v;
}

inline double gour_form(double xi1, double xi2) {
  const double radicand = 1.0 / 3.0 + 2.0 / 9.0 * (std::cos(xi1) + std::cos(xi2) + std::cos(xi1 - xi2));
  return binary_entropy(0.5 * (1.0 + std::sqrt(std::max(radicand, 0.0))));
}

}  // namespace detail

/// Channel (sqrt(1 - 2 a1^2), a1, a1). The odd coefficient plays the role of
/// the lone coefficient in the xi angles.
inline double gour_e12_case1(double a1) {
  if (!std::isfinite(a1) || a1 <= 0.0) throw DomainError("gour_e12_case1: a1 must be positive");
  const double s1 = a1 * a1;
  if (s1 > 0.5 + tol::kChannelInput) throw DomainError("gour_e12_case1: a1^2 exceeds 1/2");
  const double y2 = std::max(1.0 - 2.0 * s1, 0.0);
  const double xi1 = kPi - detail::checked_acos((2.0 * s1 * s1 - y2 * y2) / (2.0 * s1 * s1), "gour_e12_case1");
  const double xi2 = kPi + detail::checked_acos(y2 / (2.0 * s1), "gour_e12_case1");
  return detail::gour_form(xi1, xi2);
}

/// Channel (a0, 1/sqrt2, a2) with a0^2 + a2^2 = 1/2. At a0 = 0 or a2 = 0 the
/// arccos arguments are taken at their limits (1 and -1).
inline double gour_e12_case2(double a0, double a2) {
  if (!std::isfinite(a0) || !std::isfinite(a2) || a0 < 0.0 || a2 < 0.0) {
    throw DomainError("gour_e12_case2: coefficients must be finite and non-negative");
  }
  const double n = a0 * a0 + a2 * a2;
  if (std::abs(n - 0.5) > tol::kChannelInput) throw DomainError("gour_e12_case2: a0^2 + a2^2 must equal 1/2");
  // project onto the slice, then expand around n = 1/2 so the arguments
  // carry no cancellation when a0 or a2 is small
  const double s0 = a0 * a0 / (2.0 * n);
  const double s2 = a2 * a2 / (2.0 * n);
  const double dn = (s0 + s2) - 0.5;
  const double x1 = s0 > 0.0 ? 1.0 + dn * (s0 - s2 - 0.5) / s0 : 1.0;
  const double x2 = (s0 > 0.0 && s2 > 0.0) ? -1.0 + dn * (s0 + s2 + 0.5) / (2.0 * s0 * s2) : -1.0;
  // dn is pure rounding here, amplified by the small denominators
  const double eps = 4.0 * std::numeric_limits<double>::epsilon();
  const double slack1 = tol::kArccos + (s0 > 0.0 ? eps / s0 : 0.0);
  const double slack2 = tol::kArccos + (s0 > 0.0 && s2 > 0.0 ? eps / (s0 * s2) : 0.0);
  const double xi1 = kPi - detail::checked_acos(x1, "gour_e12_case2", slack1);
  const double xi2 = kPi + detail::checked_acos(x2, "gour_e12_case2", slack2);
  return detail::gour_form(xi1, xi2);
}

// ---------------------------------------------------------------------------
// Trade-off bounds on e12 + h12.

/// Evaluated along the a1 = a2 family with theta2 = pi/4. Uses -log2 P so
/// the value equals Sum P E_row + H.
inline double upper_bound_sum(double a1) {
  if (!std::isfinite(a1) || a1 <= 0.0) throw DomainError("upper_bound_sum: a1 must be positive");
  const double s1 = a1 * a1;
  const double slack = 1e-12;
  if (s1 < 1.0 / 3.0 - slack || s1 > 0.5 + slack) {
    throw DomainError("upper_bound_sum: a1^2 = " + std::to_string(s1) + " outside [1/3, 1/2]");
  }
  const double theta3 = 0.5 * detail::checked_acos((1.0 - 2.0 * s1) / s1, "upper_bound_sum");
  const double theta1 = 0.5 * std::atan2(-std::sqrt(2.0) * std::cos(2.0 * theta3), std::sin(2.0 * theta3));
  const double c1 = std::cos(theta1), sn1 = std::sin(theta1);
  const double c3 = std::cos(theta3), sn3 = std::sin(theta3);
  const double den = 4.0 + 2.0 * std::cos(2.0 * theta3);
  const double p_plus = (sn1 * sn1 + c1 * c1 * c3 * c3) / den;
  const double p_minus = (c3 * c3 + c1 * c1 * sn3 * sn3) / den;
  const double p_three = c3 * c3 / den;
  const double t_plus = 1.0 - std::pow(c1, 4) * std::pow(sn3, 4);
  const double t_minus = 1.0 - std::pow(sn1, 4) * std::pow(sn3, 4);
  const double t_three = c3 * c3 * (1.0 + sn3 * sn3);
  auto term = [](double p, double c) { return p > 0.0 ? p * (entanglement_from_tangle(c) - std::log2(p)) : 0.0; };
  return 2.0 * (term(p_plus, t_plus) + term(p_minus, t_minus) + term(p_three, t_three));
}

inline double bound_slope() { return (5.0 / 3.0 - kLog2Of3) / (kLog2Of3 - 1.5); }
inline double bound_intercept() { return 2.0 * kLog2Of3 + 11.0 / 6.0 - 1.0 / (4.0 * kLog2Of3 - 6.0); }

inline double bound_g(double q) {
  if (!(q >= 0.0)) throw DomainError("bound_g: q must be non-negative");
  const double q1 = q + 1.0;
  const double q2 = 2.0 * q + 1.0;
  double g = (q + 3.0) / q1 + 2.0 * std::log2(q1) - q2 / (q1 * q1) * std::log2(q2);
  if (q > 0.0) g -= q * q2 / (q1 * q1) * std::log2(q);
  return g;
}

/// q in [0, 1/2] with H(q) = 2(E - 1), by bisection.
inline double solve_q(double e) {
  const double target = 2.0 * (e - 1.0);
  if (target < -tol::kEntropyDomain || target > 1.0 + tol::kEntropyDomain) {
    throw DomainError("solve_q: E = " + std::to_string(e) + " outside [1, 3/2]");
  }
  if (target <= 0.0) return 0.0;
  if (target >= 1.0) return 0.5;
  double lo = 0.0, hi = 0.5;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (binary_entropy(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

inline double lower_bound_f1(double e) { return bound_g(solve_q(e)); }
inline double lower_bound_f2(double e) { return bound_slope() * e + bound_intercept(); }

/// Piecewise lower bound in the channel entanglement E on [1, log2 3]; the
/// second piece is used from E = 3/2 on.
inline double lower_bound_sum(double e) {
  const double slack = 1e-12;
  if (!std::isfinite(e) || e < 1.0 - slack || e > kLog2Of3 + slack) {
    throw DomainError("lower_bound_sum: E = " + std::to_string(e) + " outside [1, log2 3]");
  }
  e = std::clamp(e, 1.0, kLog2Of3);
  return e < 1.5 ? lower_bound_f1(e) : lower_bound_f2(e);
}

struct BoundCurve {
  enum class Kind { kLowerF1, kLowerF2, kUpper };
  Kind kind = Kind::kLowerF1;
  Interval domain;
  std::optional<double> k;
  std::optional<double> b;

  [[nodiscard]] double operator()(double e) const {
    if (!domain.contains(e, 1e-12)) throw DomainError("BoundCurve: E outside the curve's domain");
    switch (kind) {
      case Kind::kLowerF1:
        return lower_bound_f1(e);
      case Kind::kLowerF2:
        return lower_bound_f2(e);
      case Kind::kUpper:
        break;
    }
    // E(a1) on the a1 = a2 family is monotone in a1; invert by bisection.
    auto entropy_of = [](double s1) {
      const double odd = std::max(1.0 - 2.0 * s1, 0.0);
      return entropy_term(odd) + 2.0 * entropy_term(s1);
    };
    double lo = 1.0 / 3.0, hi = 0.5;
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
      const double mid = 0.5 * (lo + hi);
      (entropy_of(mid) > e ? lo : hi) = mid;
    }
    return upper_bound_sum(std::sqrt(0.5 * (lo + hi)));
  }
};

inline BoundCurve bound_curve(BoundCurve::Kind kind) {
  switch (kind) {
    case BoundCurve::Kind::kLowerF1:
      return {kind, {1.0, 1.5}, std::nullopt, std::nullopt};
    case BoundCurve::Kind::kLowerF2:
      return {kind, {1.5, kLog2Of3}, bound_slope(), bound_intercept()};
    case BoundCurve::Kind::kUpper:
      break;
  }
  return {BoundCurve::Kind::kUpper, {1.0, kLog2Of3}, std::nullopt, std::nullopt};
}

}  // namespace teleportsim
