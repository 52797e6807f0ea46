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

// Parameter sweeps over channels and scheme angles, and their CSV / JSON
// emitters. Every grid point is evaluated from its own seed so the output
// does not depend on evaluation order.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "teleportsim/channel.hpp"
#include "teleportsim/errors.hpp"
#include "teleportsim/resources.hpp"
#include "teleportsim/scheme.hpp"
#include "teleportsim/teleport.hpp"

namespace teleportsim {

inline constexpr int kDefaultDensity = 200;
inline constexpr int kGateInputs = 4;
inline constexpr double kGateFidelity = 1e-10;

struct SweepRecord {
  double a0 = 0.0, a1 = 0.0, a2 = 0.0;
  double theta1 = 0.0, theta2 = 0.0, theta3 = 0.0;
  double e_channel = 0.0;
  double e12 = 0.0;
  double h12 = 0.0;
  double sum = 0.0;
  double bound_lower = 0.0;
  std::optional<double> bound_upper;
  std::string curve;  // region, blue, green or degenerate
};

struct SweepResult {
  std::vector<SweepRecord> records;
  std::size_t skipped_infeasible = 0;
};

inline const std::vector<std::string>& sweep_columns() {
  static const std::vector<std::string> cols{"a0",  "a1",  "a2",      "theta1",      "theta2",      "theta3", "e_channel",
                                             "e12", "h12", "sum", "bound_lower", "bound_upper", "curve"};
  return cols;
}

/// splitmix64 finalizer; decorrelates per-point seeds.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) throw ValidationError("linspace: need at least one point");
  if (n == 1) return {lo};
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) xs[static_cast<std::size_t>(i)] = i + 1 == n ? hi : lo + (hi - lo) * i / (n - 1);
  return xs;
}

namespace detail {

inline void require_density(int density) {
  if (density < 2) throw ValidationError("sweep density must be at least 2");
}

/// Runs the protocol on a few Haar inputs; true when every branch is exact.
inline bool fidelity_gate(const SchmidtChannel& ch, const SchemeParams& params, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (int k = 0; k < kGateInputs; ++k) {
    const auto report = run_teleport(haar_random_qubit(rng), ch, params);
    if (report.min_fidelity < 1.0 - kGateFidelity) return false;
  }
  return true;
}

inline double safe_upper(double a1) {
  const double s1 = a1 * a1;
  return upper_bound_sum(std::sqrt(std::clamp(s1, 1.0 / 3.0, 0.5)));
}

// Appends a record when the scheme passes the fidelity gate; otherwise the
// point counts as skipped.
inline void emit(SweepResult& out, const SchmidtChannel& ch, const SchemeParams& params, const std::string& curve,
                 std::optional<double> upper, std::uint64_t seed) {
  if (!fidelity_gate(ch, params, seed)) {
    ++out.skipped_infeasible;
    return;
  }
  const ResourceReport r = resource_report(ch, params);
  SweepRecord rec;
  rec.a0 = ch[0];
  rec.a1 = ch[1];
  rec.a2 = ch[2];
  rec.theta1 = params.theta[0];
  rec.theta2 = params.theta[1];
  rec.theta3 = params.theta[2];
  rec.e_channel = r.e_channel;
  rec.e12 = r.e12;
  rec.h12 = r.h12;
  rec.sum = r.sum;
  rec.bound_lower = lower_bound_sum(r.e_channel);
  rec.bound_upper = upper;
  rec.curve = curve;
  out.records.push_back(std::move(rec));
}

}  // namespace detail

/// Channels (a0, a1, a1) from a0 = 1e-4 up to the symmetric point. For
/// these the only admissible theta3 is 1/2 arccos(a0^2 / a1^2), and theta2
/// is free, so the region rows scan theta2 over [0, pi/2] (points outside
/// its admissible interval are skipped). Blue rows pin theta2 = pi/4.
inline SweepResult sweep_case1(int density, std::uint64_t seed) {
  detail::require_density(density);
  SweepResult out;
  std::uint64_t index = 0;
  const auto theta2_grid = linspace(0.0, kPi / 2.0, density);
  for (double a0 : linspace(1e-4, 1.0 / std::sqrt(3.0), density)) {
    const double a1 = std::sqrt((1.0 - a0 * a0) / 2.0);
    a0 = std::min(a0, a1);  // rounding at the symmetric end
    const SchmidtChannel ch = SchmidtChannel::normalized(a0, a1, a1, tol::kChannelInput);
    const double theta3 = 0.5 * clamped_acos(std::min(a0 * a0 / (a1 * a1), 1.0));
    const double upper = detail::safe_upper(ch[1]);
    for (double theta2 : theta2_grid) {
      const auto params = try_solve_constraints(ch, theta3, SolveHints{std::nullopt, theta2});
      const std::uint64_t s = mix_seed(seed, index++);
      if (!params || std::abs(params->theta[1] - theta2) > 1e-9) {
        ++out.skipped_infeasible;
        continue;
      }
      detail::emit(out, ch, *params, "region", upper, s);
    }
    const auto blue = try_solve_constraints(ch, theta3, SolveHints{std::nullopt, kPi / 4.0});
    const std::uint64_t s = mix_seed(seed, index++);
    if (!blue) {
      ++out.skipped_infeasible;
      continue;
    }
    detail::emit(out, ch, *blue, "blue", upper, s);
  }
  return out;
}

/// Channels (a0, 1/sqrt2, a2) with a0 from 1e-4 to a2 = 1e-4; for each, the
/// admissible theta3 set is gridded. Green rows follow theta1 = pi/4,
/// theta2 = 0 with theta3 in [arcsin sqrt(1/3), pi/4], which fixes
/// a2^2 = tan^2(theta3) / 2.
inline SweepResult sweep_case2(int density, std::uint64_t seed) {
  detail::require_density(density);
  SweepResult out;
  std::uint64_t index = 0;
  const double a1 = 1.0 / std::sqrt(2.0);
  const double a0_max = std::sqrt(0.5 - 1e-8);
  for (double a0 : linspace(1e-4, a0_max, density)) {
    const double a2 = std::sqrt(std::max(0.5 - a0 * a0, 0.0));
    const SchmidtChannel ch = SchmidtChannel::normalized(a0, a1, a2, tol::kChannelInput);
    const auto intervals = admissible_theta3(ch);
    if (intervals.empty()) {
      ++out.skipped_infeasible;
      continue;
    }
    for (const Interval& iv : intervals) {
      const int n = iv.width() > 0.0 ? density : 1;
      for (double theta3 : linspace(iv.lo, iv.hi, n)) {
        const auto params = try_solve_constraints(ch, theta3);
        const std::uint64_t s = mix_seed(seed, index++);
        if (!params) {
          ++out.skipped_infeasible;
          continue;
        }
        detail::emit(out, ch, *params, "region", std::nullopt, s);
      }
    }
  }
  for (double theta3 : linspace(std::asin(std::sqrt(1.0 / 3.0)), kPi / 4.0, density)) {
    const double t = std::tan(theta3);
    const double a2sq = std::min(0.5 * t * t, 0.5);
    const SchmidtChannel ch =
        SchmidtChannel::normalized(std::sqrt(std::max(0.5 - a2sq, 0.0)), a1, std::sqrt(a2sq), tol::kChannelInput);
    const auto params = try_solve_constraints(ch, theta3, SolveHints{kPi / 4.0, 0.0});
    const std::uint64_t s = mix_seed(seed, index++);
    if (!params) {
      ++out.skipped_infeasible;
      continue;
    }
    detail::emit(out, ch, *params, "green", std::nullopt, s);
  }
  return out;
}

/// Channel (0, 1/sqrt2, 1/sqrt2) measured in the theta1 family of
/// closed-form bases.
inline SweepResult sweep_degenerate(const std::vector<double>& thetas, std::uint64_t seed = 0) {
  SweepResult out;
  const double r = 1.0 / std::sqrt(2.0);
  const SchmidtChannel ch = SchmidtChannel::normalized(0.0, r, r, tol::kChannelInput);
  const double upper = upper_bound_sum(r);
  std::uint64_t index = 0;
  for (double theta : thetas) {
    if (!(theta >= 0.0 && theta <= kPi / 2.0)) throw ValidationError("sweep_degenerate: theta outside [0, pi/2]");
    detail::emit(out, ch, special_case_params(SpecialVariant::kA, theta), "degenerate", upper,
                 mix_seed(seed, index++));
  }
  return out;
}

inline SweepResult sweep_degenerate(int density, std::uint64_t seed = 0) {
  detail::require_density(density);
  return sweep_degenerate(linspace(0.0, kPi / 2.0, density), seed);
}

struct BoundRow {
  double e = 0.0;
  double lower = 0.0;
  std::optional<double> upper;
};

/// E_i = 1 + (log2 3 - 1)(i + 1) / n for i = 0..n-1.
inline std::vector<double> default_entropy_grid(int n) {
  if (n < 1) throw ValidationError("bounds grid needs at least one point");
  std::vector<double> es;
  for (int i = 0; i < n; ++i) es.push_back(i + 1 == n ? kLog2Of3 : 1.0 + (kLog2Of3 - 1.0) * (i + 1) / n);
  return es;
}

inline std::vector<BoundRow> bounds_table(const std::vector<double>& es) {
  const BoundCurve upper = bound_curve(BoundCurve::Kind::kUpper);
  std::vector<BoundRow> rows;
  for (double e : es) {
    BoundRow row{e, lower_bound_sum(e), std::nullopt};
    if (upper.domain.contains(e)) row.upper = upper(e);
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Emitters.

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_csv(std::ostream& os, const SweepResult& result) {
  const auto& cols = sweep_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
  for (const auto& r : result.records) {
    for (double x : {r.a0, r.a1, r.a2, r.theta1, r.theta2, r.theta3, r.e_channel, r.e12, r.h12, r.sum, r.bound_lower}) {
      os << format_double(x) << ',';
    }
    os << (r.bound_upper ? format_double(*r.bound_upper) : "") << ',' << r.curve << '\n';
  }
  os << "# skipped_infeasible=" << result.skipped_infeasible << '\n';
}

inline void write_csv(std::ostream& os, const std::vector<BoundRow>& rows) {
  os << "E,lower,upper\n";
  for (const auto& r : rows) {
    os << format_double(r.e) << ',' << format_double(r.lower) << ',' << (r.upper ? format_double(*r.upper) : "")
       << '\n';
  }
}

inline nlohmann::json to_json(const SweepRecord& r) {
  nlohmann::json j;
  j["a0"] = r.a0;
  j["a1"] = r.a1;
  j["a2"] = r.a2;
  j["theta1"] = r.theta1;
  j["theta2"] = r.theta2;
  j["theta3"] = r.theta3;
  j["e_channel"] = r.e_channel;
  j["e12"] = r.e12;
  j["h12"] = r.h12;
  j["sum"] = r.sum;
  j["bound_lower"] = r.bound_lower;
  j["bound_upper"] = r.bound_upper ? nlohmann::json(*r.bound_upper) : nlohmann::json(nullptr);
  j["curve"] = r.curve;
  return j;
}

inline nlohmann::json to_json(const SweepResult& result) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& r : result.records) records.push_back(to_json(r));
  return {{"records", std::move(records)}, {"skipped_infeasible", result.skipped_infeasible}};
}

inline nlohmann::json to_json(const std::vector<BoundRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    arr.push_back({{"E", r.e}, {"lower", r.lower}, {"upper", r.upper ? nlohmann::json(*r.upper) : nlohmann::json()}});
  }
  return {{"bounds", std::move(arr)}};
}

}  // namespace teleportsim
