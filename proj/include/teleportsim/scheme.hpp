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

// Construction of Alice's joint-measurement unitary D12 for the qubit +
// two-qutrit protocol, and the solver that makes it teleport perfectly.
//
// D12 is built from one real rotation U in SO(3) and two phases. Its rows,
// read as kets on qubit 1 (x) qutrit 2 in the order |00>,|01>,|02>,|10>,
// |11>,|12>, form the measurement basis, labelled 1+, 2+, 3+, 1-, 2-, 3-.
// Column l of U pairs with Schmidt index l-1 of the channel. Perfect
// teleportation needs
//
//   a0^2 u_k1^2 + a2^2 u_k3^2 = a1^2 u_k2^2            (k = 1, 2)
//   a0^2 u_31^2 + a1^2 u_32^2 e^{i d1} + a2^2 u_33^2 e^{-i d2} = 0
//
// with the channel's maximal coefficient at index 1.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "teleportsim/channel.hpp"
#include "teleportsim/errors.hpp"
#include "teleportsim/numerics.hpp"
#include "teleportsim/qlinalg.hpp"

namespace teleportsim {

inline const std::vector<std::string>& qutrit_branch_labels() {
  static const std::vector<std::string> labels{"1+", "2+", "3+", "1-", "2-", "3-"};
  return labels;
}

inline const std::vector<std::string>& qubit_branch_labels() {
  static const std::vector<std::string> labels{"1+", "2+", "1-", "2-"};
  return labels;
}

/// Free parameters of the measurement unitary. zeta is kept for
/// completeness; perfect teleportation requires sin^2 zeta = 1/2.
struct SchemeParams {
  std::array<double, 3> theta{0.0, 0.0, 0.0};
  std::array<double, 2> delta{0.0, 0.0};
  double zeta = kPi / 4.0;

  friend bool operator==(const SchemeParams&, const SchemeParams&) = default;
};

using Rotation = Eigen::Matrix3d;

namespace detail {

inline Rotation rot_z(double t) {
  Rotation r;
  r << std::cos(t), -std::sin(t), 0.0, std::sin(t), std::cos(t), 0.0, 0.0, 0.0, 1.0;
  return r;
}

inline Rotation rot_y(double t) {
  Rotation r;
  r << std::cos(t), 0.0, std::sin(t), 0.0, 1.0, 0.0, -std::sin(t), 0.0, std::cos(t);
  return r;
}

inline Rotation rot_x(double t) {
  Rotation r;
  r << 1.0, 0.0, 0.0, 0.0, std::cos(t), -std::sin(t), 0.0, std::sin(t), std::cos(t);
  return r;
}

inline Rotation d_rot_z(double t) {
  Rotation r;
  r << -std::sin(t), -std::cos(t), 0.0, std::cos(t), -std::sin(t), 0.0, 0.0, 0.0, 0.0;
  return r;
}

inline Rotation d_rot_y(double t) {
  Rotation r;
  r << -std::sin(t), 0.0, std::cos(t), 0.0, 0.0, 0.0, -std::cos(t), 0.0, -std::sin(t);
  return r;
}

// Wraps an angle into (-pi, pi].
inline double wrap_angle(double t) {
  t = std::remainder(t, 2.0 * kPi);
  return t <= -kPi ? t + 2.0 * kPi : t;
}

}  // namespace detail

/// U = Rz(theta1) Ry(theta2) Rx(theta3).
///
/// theta3 tilts the third row of U about the x axis, theta2 sets its x
/// component and theta1 rotates rows 1 and 2 within the plane orthogonal to
/// it. Under this convention the degenerate channel (0, 1/sqrt2, 1/sqrt2)
/// has the two one-parameter basis families (theta2 = 0, theta3 = pi/4,
/// theta1 free) and (theta1 = 0, theta3 = pi/4, theta2 free).
inline Rotation rotation_from_angles(double theta1, double theta2, double theta3) {
  return detail::rot_z(theta1) * detail::rot_y(theta2) * detail::rot_x(theta3);
}

inline Rotation rotation_from_angles(const std::array<double, 3>& theta) {
  return rotation_from_angles(theta[0], theta[1], theta[2]);
}

struct Phases {
  double delta1 = 0.0;
  double delta2 = 0.0;
};

/// Squared lengths of the three phasors that must close into a triangle:
/// w_j = a_j^2 u_{3,j+1}^2.
inline std::array<double, 3> phasor_weights(const SchmidtChannel& ch, const Rotation& u) {
  const auto a2 = ch.squared();
  return {a2[0] * u(2, 0) * u(2, 0), a2[1] * u(2, 1) * u(2, 1), a2[2] * u(2, 2) * u(2, 2)};
}

/// |w0 + w1 e^{i d1} + w2 e^{-i d2}|.
inline double phase_residual(const std::array<double, 3>& w, const Phases& p) {
  const Complex sum = w[0] + w[1] * std::exp(kI * p.delta1) + w[2] * std::exp(-kI * p.delta2);
  return std::abs(sum);
}

/// Picks (d1, d2) so that the three phasors cancel. d1 is taken from the
/// law of cosines with sin d1 >= 0; d2 then follows from exact cancellation
/// of the remaining phasor. A vanishing phasor leaves one phase free, which
/// is set to zero.
inline Phases solve_phases(const std::array<double, 3>& w) {
  static constexpr std::array<const char*, 3> kNames{"a0^2 u31^2", "a1^2 u32^2", "a2^2 u33^2"};
  for (double x : w) {
    if (!(x >= 0.0)) throw ValidationError("solve_phases: phasor weights must be non-negative");
  }
  const double total = w[0] + w[1] + w[2];
  for (std::size_t j = 0; j < 3; ++j) {
    if (w[j] > total - w[j] + tol::kTriangle) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "solve_phases: no solution, " << kNames[j] << " = " << w[j]
          << " exceeds the sum of the other two (" << total - w[j] << ")";
      throw InfeasibleError(msg.str());
    }
  }
  constexpr double eps = tol::kDegenerate;
  Phases p;
  if (w[0] <= eps && w[1] <= eps && w[2] <= eps) return p;
  if (w[2] <= eps) {
    p.delta1 = kPi;
    return p;
  }
  if (w[0] > eps && w[1] > eps) {
    // atan2 of the law-of-cosines pair; the sine comes from the triangle
    // area (Kahan's ordering) so nearly flat triangles stay accurate
    std::array<double, 3> s = w;
    std::sort(s.begin(), s.end(), std::greater<>());
    const double f = (s[0] + (s[1] + s[2])) * std::max(s[2] - (s[0] - s[1]), 0.0) * (s[2] + (s[0] - s[1])) *
                     std::max(s[0] + (s[1] - s[2]), 0.0);
    const double sine = 0.5 * std::sqrt(f) / (w[0] * w[1]);
    const double cosine = (w[2] * w[2] - w[0] * w[0] - w[1] * w[1]) / (2.0 * w[0] * w[1]);
    p.delta1 = std::atan2(sine, cosine);
  }
  const Complex rest = -(w[0] + w[1] * std::exp(kI * p.delta1));
  p.delta2 = detail::wrap_angle(-std::arg(rest));
  return p;
}

inline Phases solve_phases(const SchmidtChannel& ch, const Rotation& u) {
  return solve_phases(phasor_weights(ch, u));
}

/// Values that must vanish for a perfect scheme.
struct ConstraintResiduals {
  double row1 = 0.0;   // a0^2 u11^2 + a2^2 u13^2 - a1^2 u12^2
  double row2 = 0.0;   // same for the second row of U
  double phase = 0.0;  // modulus of the phasor sum

  [[nodiscard]] double max_abs() const {
    return std::max({std::abs(row1), std::abs(row2), std::abs(phase)});
  }
};

inline double row_residual(const SchmidtChannel& ch, const Rotation& u, int row) {
  const auto a2 = ch.squared();
  return a2[0] * u(row, 0) * u(row, 0) + a2[2] * u(row, 2) * u(row, 2) -
         a2[1] * u(row, 1) * u(row, 1);
}

inline ConstraintResiduals constraint_residuals(const SchmidtChannel& ch, const SchemeParams& p) {
  const Rotation u = rotation_from_angles(p.theta);
  return {row_residual(ch, u, 0), row_residual(ch, u, 1),
          phase_residual(phasor_weights(ch, u), Phases{p.delta[0], p.delta[1]})};
}

/// Optional values for parameters the constraints leave undetermined. Used
/// only when the corresponding parameter is genuinely free.
struct SolveHints {
  std::optional<double> theta1;
  std::optional<double> theta2;
};

namespace detail {

inline void require_canonical(const SchmidtChannel& ch, const char* who) {
  if (!is_canonical(ch)) {
    throw ValidationError(std::string(who) +
                          ": channel must have its maximal coefficient at index 1 (canonicalize first)");
  }
}

// sin^2(theta2) forced by the row-sum identity for a given theta3, or
// nullopt when no theta2 exists. `free` is set when every theta2 works.
inline std::optional<double> forced_sin2_theta2(const SchmidtChannel& ch, double theta3, bool& free) {
  const auto a2 = ch.squared();
  const double c3 = std::cos(theta3);
  const double s3 = std::sin(theta3);
  const double num = a2[0] + a2[2] * s3 * s3 - a2[1] * c3 * c3;
  const double den = a2[0] - a2[2] * c3 * c3 + a2[1] * s3 * s3;
  free = false;
  if (std::abs(den) <= tol::kDegenerate) {
    if (std::abs(num) > tol::kDegenerate) return std::nullopt;
    free = true;
    return 0.0;
  }
  const double x = num / den;
  if (x < -tol::kDegenerate || x > 1.0 + tol::kDegenerate) return std::nullopt;
  // snap rounding noise at the ends; asin(sqrt(x)) would amplify it
  if (x <= tol::kDegenerate) return 0.0;
  if (x >= 1.0 - tol::kDegenerate) return 1.0;
  return x;
}

// Rotation angle in the plane orthogonal to row 3 that puts both remaining
// rows on the constraint cone. Returns nullopt when every angle works.
inline std::optional<double> cone_angle(const SchmidtChannel& ch, double theta2, double theta3) {
  const auto a2 = ch.squared();
  const Eigen::Vector3d form(a2[0], -a2[1], a2[2]);
  const Rotation m = rot_y(theta2) * rot_x(theta3);
  const Eigen::Vector3d m1 = m.row(0).transpose();
  const Eigen::Vector3d m2 = m.row(1).transpose();
  const double p = m1.dot(form.cwiseProduct(m1));
  const double q = m1.dot(form.cwiseProduct(m2));
  if (std::abs(p) <= tol::kDegenerate && std::abs(q) <= tol::kDegenerate) return std::nullopt;
  // p cos(2 t) - q sin(2 t) = 0, principal root in (-pi/4, pi/4].
  double t = 0.5 * std::atan2(p, q);
  if (t > kPi / 4.0 + 1e-15) t -= kPi / 2.0;
  if (t <= -kPi / 4.0 + 1e-15) t += kPi / 2.0;
  return t;
}

inline std::optional<SchemeParams> finish_scheme(const SchmidtChannel& ch, double theta1, double theta2,
                                                 double theta3) {
  const Rotation u = rotation_from_angles(theta1, theta2, theta3);
  if (std::abs(row_residual(ch, u, 0)) > tol::kResidual ||
      std::abs(row_residual(ch, u, 1)) > tol::kResidual) {
    return std::nullopt;
  }
  const auto w = phasor_weights(ch, u);
  const double total = w[0] + w[1] + w[2];
  for (double x : w) {
    if (x > total - x + tol::kTriangle) return std::nullopt;
  }
  const Phases ph = solve_phases(w);
  if (phase_residual(w, ph) > tol::kUnitarity) return std::nullopt;
  SchemeParams params;
  params.theta = {theta1, theta2, theta3};
  params.delta = {ph.delta1, ph.delta2};
  return params;
}

}  // namespace detail

/// Solves the perfect-teleportation constraints with theta3 as the free
/// parameter. theta2 is taken in [0, pi/2] and theta1 in (-pi/4, pi/4];
/// the other roots differ by sign flips and row swaps of U and give the
/// same resources. Returns nullopt when theta3 is not admissible.
///
/// When the channel leaves theta2 (or theta1) undetermined, the hint is
/// used; the default for theta2 is pi/4 and for theta1 is 0.
inline std::optional<SchemeParams> try_solve_constraints(const SchmidtChannel& ch, double theta3,
                                                         const SolveHints& hints = {}) {
  detail::require_canonical(ch, "solve_constraints");
  if (!std::isfinite(theta3)) throw ValidationError("solve_constraints: theta3 is not finite");
  bool theta2_free = false;
  const auto sin2 = detail::forced_sin2_theta2(ch, theta3, theta2_free);
  if (!sin2) return std::nullopt;
  const double theta2 = theta2_free ? hints.theta2.value_or(kPi / 4.0) : std::asin(std::sqrt(*sin2));
  const auto cone = detail::cone_angle(ch, theta2, theta3);
  const double theta1 = cone ? *cone : hints.theta1.value_or(0.0);
  return detail::finish_scheme(ch, theta1, theta2, theta3);
}

namespace detail {

// Triangle slack of the row-3 phasors at theta3 (positive inside the
// admissible set); nullopt when no theta2 exists at all.
inline std::optional<double> triangle_slack(const SchmidtChannel& ch, double theta3) {
  bool free = false;
  const auto sin2 = forced_sin2_theta2(ch, theta3, free);
  if (!sin2) return std::nullopt;
  const double theta2 = free ? kPi / 4.0 : std::asin(std::sqrt(*sin2));
  const auto cone = cone_angle(ch, theta2, theta3);
  const Rotation u = rotation_from_angles(cone.value_or(0.0), theta2, theta3);
  const auto w = phasor_weights(ch, u);
  const double total = w[0] + w[1] + w[2];
  return total - 2.0 * std::max({w[0], w[1], w[2]});
}

inline bool admissible(const SchmidtChannel& ch, double theta3) {
  return try_solve_constraints(ch, theta3).has_value();
}

}  // namespace detail

/// Admissible theta3 values in [0, pi/2] (the constraints only depend on
/// theta3 modulo that range up to sign flips). Found by a grid scan with
/// bisection-refined endpoints, plus a local search on the triangle slack
/// so that narrow intervals between grid points are not lost. Intervals are
/// sorted and may be single points.
inline std::vector<Interval> admissible_theta3(const SchmidtChannel& ch, int grid = 2048) {
  detail::require_canonical(ch, "admissible_theta3");
  if (grid < 2) throw ValidationError("admissible_theta3: grid must have at least 2 points");
  const double lo = 0.0;
  const double hi = kPi / 2.0;
  const double step = (hi - lo) / grid;
  std::vector<double> xs(static_cast<std::size_t>(grid) + 1);
  std::vector<char> ok(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xs[i] = i + 1 == xs.size() ? hi : lo + step * static_cast<double>(i);
    ok[i] = detail::admissible(ch, xs[i]);
  }

  // Seed extra candidates at local maxima of the triangle slack between
  // infeasible grid points, and at the point where theta2 becomes free.
  std::vector<double> candidates;
  std::vector<double> slack(xs.size(), -1.0);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    slack[i] = detail::triangle_slack(ch, xs[i]).value_or(-1.0);
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (ok[i]) continue;
    const double left = i > 0 ? slack[i - 1] : -2.0;
    const double right = i + 1 < xs.size() ? slack[i + 1] : -2.0;
    if (slack[i] < left || slack[i] < right || slack[i] <= -1.0) continue;
    // golden-section maximisation of the slack on the neighbouring cells
    double a = i > 0 ? xs[i - 1] : xs[i];
    double b = i + 1 < xs.size() ? xs[i + 1] : xs[i];
    constexpr double kGolden = 0.6180339887498949;
    for (int it = 0; it < 80 && b - a > 1e-15; ++it) {
      const double x1 = b - kGolden * (b - a);
      const double x2 = a + kGolden * (b - a);
      const double f1 = detail::triangle_slack(ch, x1).value_or(-1.0);
      const double f2 = detail::triangle_slack(ch, x2).value_or(-1.0);
      if (f1 < f2) {
        a = x1;
      } else {
        b = x2;
      }
    }
    candidates.push_back(0.5 * (a + b));
  }
  const auto a2 = ch.squared();
  if (std::abs(a2[1] - a2[2]) <= tol::kDegenerate && a2[1] > 0.0) {
    const double c = clamped_acos(a2[0] / a2[1]);
    if (!std::isnan(c)) candidates.push_back(0.5 * c);
  }

  auto refine = [&](double good, double bad) {
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (good + bad);
      if (detail::admissible(ch, mid)) {
        good = mid;
      } else {
        bad = mid;
      }
    }
    return good;
  };

  std::vector<Interval> out;
  for (std::size_t i = 0; i < xs.size();) {
    if (!ok[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < xs.size() && ok[j + 1]) ++j;
    const double left = i > 0 ? refine(xs[i], xs[i - 1]) : xs[i];
    const double right = j + 1 < xs.size() ? refine(xs[j], xs[j + 1]) : xs[j];
    out.push_back({left, right});
    i = j + 1;
  }
  for (double c : candidates) {
    if (!detail::admissible(ch, c)) continue;
    const bool covered = std::any_of(out.begin(), out.end(), [&](const Interval& iv) {
      return iv.contains(c, 1e-12);
    });
    if (covered) continue;
    // grow the isolated candidate outwards as far as it stays admissible
    const double width = step;
    const double left = detail::admissible(ch, c - width) ? c - width : refine(c, c - width);
    const double right = detail::admissible(ch, c + width) ? c + width : refine(c, c + width);
    out.push_back({std::max(lo, left), std::min(hi, right)});
  }
  std::sort(out.begin(), out.end(), [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
  return out;
}

inline std::string describe_intervals(const std::vector<Interval>& intervals) {
  if (intervals.empty()) return "{}";
  std::ostringstream os;
  os.precision(12);
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    if (i) os << " U ";
    os << '[' << intervals[i].lo << ", " << intervals[i].hi << ']';
  }
  return os.str();
}

/// Throwing form of try_solve_constraints. The InfeasibleError carries the
/// admissible theta3 set for the channel.
inline SchemeParams solve_constraints(const SchmidtChannel& ch, double theta3, const SolveHints& hints = {}) {
  if (auto params = try_solve_constraints(ch, theta3, hints)) return *params;
  auto admissible = admissible_theta3(ch);
  const std::string msg = "theta3 = " + std::to_string(theta3) +
                          " is not admissible for this channel; admissible theta3 set: " +
                          describe_intervals(admissible);
  throw InfeasibleError(msg, std::move(admissible));
}

/// Solves the two row constraints for (theta1, theta2) at fixed theta3 by
/// damped (Levenberg-Marquardt) Newton iteration from `restarts` random
/// starts in [0, pi/2]^2. Independent of the closed-form reduction used by
/// try_solve_constraints; the first root that also closes the phasor
/// triangle is returned.
inline std::optional<SchemeParams> solve_constraints_newton(const SchmidtChannel& ch, double theta3,
                                                            std::mt19937_64& rng, int restarts = 20) {
  detail::require_canonical(ch, "solve_constraints_newton");
  const auto a2 = ch.squared();
  const Eigen::Vector3d form(a2[0], -a2[1], a2[2]);
  const Rotation rx = detail::rot_x(theta3);

  auto eval = [&](const Eigen::Vector2d& t, Eigen::Vector2d& r, Eigen::Matrix2d& jac) {
    const Rotation rz = detail::rot_z(t(0));
    const Rotation ry = detail::rot_y(t(1));
    const Rotation u = rz * ry * rx;
    const Rotation du1 = detail::d_rot_z(t(0)) * ry * rx;
    const Rotation du2 = rz * detail::d_rot_y(t(1)) * rx;
    for (int k = 0; k < 2; ++k) {
      const Eigen::Vector3d row = u.row(k).transpose();
      r(k) = row.dot(form.cwiseProduct(row));
      jac(k, 0) = 2.0 * row.dot(form.cwiseProduct(du1.row(k).transpose()));
      jac(k, 1) = 2.0 * row.dot(form.cwiseProduct(du2.row(k).transpose()));
    }
  };

  std::uniform_real_distribution<double> start(0.0, kPi / 2.0);
  for (int attempt = 0; attempt < restarts; ++attempt) {
    Eigen::Vector2d t(start(rng), start(rng));
    Eigen::Vector2d r;
    Eigen::Matrix2d jac;
    eval(t, r, jac);
    double lambda = 1e-3;
    for (int it = 0; it < 500 && r.cwiseAbs().maxCoeff() > 0.1 * tol::kResidual; ++it) {
      const Eigen::Matrix2d normal = jac.transpose() * jac + lambda * Eigen::Matrix2d::Identity();
      const Eigen::Vector2d step = normal.ldlt().solve(-jac.transpose() * r);
      const Eigen::Vector2d trial = t + step;
      Eigen::Vector2d r_trial;
      Eigen::Matrix2d jac_trial;
      eval(trial, r_trial, jac_trial);
      if (r_trial.squaredNorm() < r.squaredNorm()) {
        const bool stalled = step.cwiseAbs().maxCoeff() < 1e-16;
        t = trial;
        r = r_trial;
        jac = jac_trial;
        lambda = std::max(lambda / 3.0, 1e-15);
        if (stalled) break;
      } else {
        lambda *= 4.0;
        if (lambda > 1e12) break;
      }
    }
    if (r.cwiseAbs().maxCoeff() > tol::kResidual) continue;
    if (auto params = detail::finish_scheme(ch, t(0), t(1), theta3)) return params;
  }
  return std::nullopt;
}

/// Alice's 6x6 unitary in the computational basis |00>,|01>,|02>,|10>,
/// |11>,|12> of qubit 1 and qutrit 2.
inline CMat assemble_D12(const SchemeParams& params) {
  const Rotation u = rotation_from_angles(params.theta);
  const Complex e1 = std::exp(kI * params.delta[0]);
  const Complex e2 = std::exp(kI * params.delta[1]);
  const double c = std::cos(params.zeta);
  const double s = std::sin(params.zeta);
  CMat d(6, 6);
  // clang-format off
  d << u(0,0),     0.0,             u(0,2),     0.0,        u(0,1),     0.0,
       0.0,        u(0,1)*e1,       0.0,        u(0,0),     0.0,        u(0,2)*e2,
       u(2,0)*c,   u(2,1)*e1*s,     u(2,2)*c,   u(2,0)*s,   u(2,1)*c,   u(2,2)*e2*s,
       u(1,0),     0.0,             u(1,2),     0.0,        u(1,1),     0.0,
       0.0,        u(1,1)*e1,       0.0,        u(1,0),     0.0,        u(1,2)*e2,
       -u(2,0)*s,  u(2,1)*e1*c,     -u(2,2)*s,  u(2,0)*c,   -u(2,1)*s,  u(2,2)*e2*c;
  // clang-format on
  if (!is_unitary(d)) {
    throw Error("assemble_D12: assembled matrix is not unitary (upstream solver bug)");
  }
  return d;
}

/// Orthonormal basis Alice measures in; vectors[k] is row k of D12 read as a
/// ket on `dims`.
struct MeasurementBasis {
  Dims dims{2, 3};
  std::vector<std::string> labels;
  std::vector<CVec> vectors;

  [[nodiscard]] std::size_t size() const { return vectors.size(); }

  [[nodiscard]] CMat gram() const {
    CMat g(static_cast<Eigen::Index>(size()), static_cast<Eigen::Index>(size()));
    for (std::size_t i = 0; i < size(); ++i) {
      for (std::size_t j = 0; j < size(); ++j) {
        g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = vectors[i].dot(vectors[j]);
      }
    }
    return g;
  }

  [[nodiscard]] bool is_orthonormal(double tolerance = tol::kUnitarity) const {
    if (size() != static_cast<std::size_t>(dims.total())) return false;
    return max_abs(gram() - CMat::Identity(dims.total(), dims.total())) <= tolerance;
  }
};

inline MeasurementBasis basis_from_unitary(const CMat& d, Dims dims, const std::vector<std::string>& labels) {
  if (d.rows() != dims.total() || d.cols() != dims.total() ||
      labels.size() != static_cast<std::size_t>(dims.total())) {
    throw ValidationError("basis_from_unitary: shape mismatch");
  }
  MeasurementBasis basis{dims, labels, {}};
  for (Eigen::Index k = 0; k < d.rows(); ++k) basis.vectors.push_back(d.row(k).transpose());
  return basis;
}

inline MeasurementBasis basis_from_D12(const CMat& d) {
  return basis_from_unitary(d, Dims{2, 3}, qutrit_branch_labels());
}

inline MeasurementBasis measurement_basis(const SchemeParams& params) {
  return basis_from_D12(assemble_D12(params));
}

// ---------------------------------------------------------------------------
// Two-qubit channel a0|00> + a1|11>.

/// Real 2x2 rotation [[cos phi, sin phi], [-sin phi, cos phi]].
inline Eigen::Matrix2d two_qubit_rotation(double phi) {
  Eigen::Matrix2d u;
  u << std::cos(phi), std::sin(phi), -std::sin(phi), std::cos(phi);
  return u;
}

/// 4x4 measurement unitary on qubits 1, 2 in the basis |00>,|01>,|10>,|11>.
/// U acts on span{|00>, |11>} and V = U (phased by e^{-i delta}) on
/// span{|10>, |01>}; eta mixes rows 2 and 4. Row labels 1+, 2+, 1-, 2-.
inline CMat two_qubit_D12(const Eigen::Matrix2d& u, double eta, double delta) {
  const Eigen::Matrix2d& v = u;
  const Complex e = std::exp(-kI * delta);
  const double c = std::cos(eta);
  const double s = std::sin(eta);
  CMat d(4, 4);
  // clang-format off
  d << u(0,0),     0.0,            0.0,        u(0,1),
       u(1,0)*c,   v(1,1)*e*s,     v(1,0)*s,   u(1,1)*c,
       0.0,        v(0,1)*e,       v(0,0),     0.0,
       -u(1,0)*s,  v(1,1)*e*c,     v(1,0)*c,   -u(1,1)*s;
  // clang-format on
  return d;
}

inline CMat two_qubit_D12(double phi, double eta, double delta) {
  return two_qubit_D12(two_qubit_rotation(phi), eta, delta);
}

inline MeasurementBasis two_qubit_basis(const CMat& d) {
  return basis_from_unitary(d, Dims{2, 2}, qubit_branch_labels());
}

/// Perfect teleportation through a0|00> + a1|11> needs a maximally
/// entangled channel.
inline bool two_qubit_feasible(double a0, double a1) {
  if (!std::isfinite(a0) || !std::isfinite(a1) || a0 < 0.0 || a1 < 0.0) {
    throw ValidationError("two_qubit_feasible: coefficients must be finite and non-negative");
  }
  if (std::abs(a0 * a0 + a1 * a1 - 1.0) > tol::kChannelInput) {
    throw ValidationError("two_qubit_feasible: channel is not normalized");
  }
  return std::abs(a0 * a0 - 0.5) <= tol::kNormalization;
}

// ---------------------------------------------------------------------------
// Closed-form bases for the degenerate channel (0, 1/sqrt2, 1/sqrt2).

enum class SpecialVariant { kA, kB };

/// Variant A is the theta1 family (theta2 = 0, theta3 = pi/4); variant B the
/// theta2 family (theta1 = 0, theta3 = pi/4). The two are not related by a
/// local unitary. Vectors are listed in the order 1+, 2+, 3+, 1-, 2-, 3-.
inline MeasurementBasis special_case_basis(SpecialVariant variant, double theta) {
  if (!(theta >= 0.0 && theta <= kPi / 2.0)) {
    throw DomainError("special_case_basis: theta must lie in [0, pi/2]");
  }
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double r = 1.0 / std::sqrt(2.0);
  // index = qubit * 3 + qutrit
  auto ket = [](std::initializer_list<std::pair<int, double>> terms) {
    CVec v = CVec::Zero(6);
    for (const auto& [index, amp] : terms) v(index) += amp;
    return v;
  };
  enum : int { k00 = 0, k01 = 1, k02 = 2, k10 = 3, k11 = 4, k12 = 5 };
  MeasurementBasis basis{Dims{2, 3}, qutrit_branch_labels(), {}};
  if (variant == SpecialVariant::kA) {
    basis.vectors = {
        ket({{k00, c}, {k11, -s * r}, {k02, s * r}}),
        ket({{k10, c}, {k01, -s * r}, {k12, -s * r}}),
        ket({{k11, 0.5}, {k02, 0.5}, {k01, 0.5}, {k12, -0.5}}),
        ket({{k00, s}, {k11, c * r}, {k02, -c * r}}),
        ket({{k10, s}, {k01, c * r}, {k12, c * r}}),
        ket({{k11, 0.5}, {k02, 0.5}, {k01, -0.5}, {k12, 0.5}}),
    };
  } else {
    basis.vectors = {
        ket({{k00, c}, {k11, s * r}, {k02, s * r}}),
        ket({{k10, c}, {k01, s * r}, {k12, -s * r}}),
        ket({{k00, -s * r}, {k11, 0.5 * c}, {k02, 0.5 * c}, {k10, -s * r}, {k01, 0.5 * c}, {k12, -0.5 * c}}),
        ket({{k11, r}, {k02, -r}}),
        ket({{k01, r}, {k12, r}}),
        ket({{k00, -s * r}, {k11, 0.5 * c}, {k02, 0.5 * c}, {k10, s * r}, {k01, -0.5 * c}, {k12, 0.5 * c}}),
    };
  }
  return basis;
}

/// Scheme parameters that reproduce special_case_basis up to row phases.
inline SchemeParams special_case_params(SpecialVariant variant, double theta) {
  SchemeParams p;
  p.theta = variant == SpecialVariant::kA ? std::array<double, 3>{theta, 0.0, kPi / 4.0}
                                          : std::array<double, 3>{0.0, theta, kPi / 4.0};
  p.delta = {0.0, kPi};
  return p;
}

}  // namespace teleportsim
