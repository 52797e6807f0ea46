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

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "teleportsim/errors.hpp"
#include "teleportsim/qlinalg.hpp"

namespace teleportsim {

/// Two-qutrit pure channel a0|00> + a1|11> + a2|22> with real, non-negative
/// Schmidt coefficients. Coefficients are stored in the order given.
class SchmidtChannel {
 public:
  /// Validates and stores the coefficients. Throws ValidationError on a
  /// negative or non-finite coefficient, or when sum a_j^2 misses 1 by more
  /// than `slack`.
  static SchmidtChannel make(double a0, double a1, double a2, double slack = tol::kChannelInput) {
    const std::array<double, 3> a{a0, a1, a2};
    for (std::size_t j = 0; j < 3; ++j) {
      if (!std::isfinite(a[j])) {
        throw ValidationError("channel coefficient a" + std::to_string(j) + " is not finite");
      }
      if (a[j] < 0.0) {
        throw ValidationError("channel coefficient a" + std::to_string(j) + " is negative");
      }
    }
    const double norm2 = a0 * a0 + a1 * a1 + a2 * a2;
    if (std::abs(norm2 - 1.0) > slack) {
      throw ValidationError("channel is not normalized: sum a_j^2 = " + std::to_string(norm2));
    }
    return SchmidtChannel(a);
  }

  /// Rescales a triple onto the unit sphere when it is already within
  /// `slack` of it. Meant for user input carrying truncated decimals.
  static SchmidtChannel normalized(double a0, double a1, double a2, double slack) {
    make(a0, a1, a2, slack);
    const double n = std::sqrt(a0 * a0 + a1 * a1 + a2 * a2);
    return make(a0 / n, a1 / n, a2 / n);
  }

  [[nodiscard]] const std::array<double, 3>& coefficients() const { return a_; }
  [[nodiscard]] double operator[](std::size_t j) const { return a_[j]; }

  [[nodiscard]] std::array<double, 3> squared() const {
    return {a_[0] * a_[0], a_[1] * a_[1], a_[2] * a_[2]};
  }

  /// |Phi> = sum_j a_j |jj> on 3 x 3.
  [[nodiscard]] CVec state() const {
    CVec phi = CVec::Zero(9);
    for (Eigen::Index j = 0; j < 3; ++j) phi(j * 3 + j) = a_[static_cast<std::size_t>(j)];
    return phi;
  }

  friend bool operator==(const SchmidtChannel&, const SchmidtChannel&) = default;

 private:
  explicit SchmidtChannel(std::array<double, 3> a) : a_(a) {}

  std::array<double, 3> a_;
};

inline SchmidtChannel make_channel(double a0, double a1, double a2) {
  return SchmidtChannel::make(a0, a1, a2);
}

/// Entanglement entropy of the channel in bits.
inline double channel_entropy(const SchmidtChannel& ch) {
  double e = 0.0;
  for (double p : ch.squared()) e += entropy_term(p);
  return std::clamp(e, 0.0, std::log2(3.0));
}

/// Perfect teleportation of a qubit is possible iff max a_j^2 <= 1/2.
inline bool is_teleport_capable(const SchmidtChannel& ch) {
  const auto sq = ch.squared();
  return *std::max_element(sq.begin(), sq.end()) <= 0.5 + tol::kCapability;
}

/// Relabeling of Schmidt indices: canonical[i] = original[perm[i]].
struct ChannelPermutation {
  std::array<int, 3> perm{0, 1, 2};

  [[nodiscard]] bool is_identity() const { return perm == std::array<int, 3>{0, 1, 2}; }

  template <typename T>
  [[nodiscard]] std::array<T, 3> apply(const std::array<T, 3>& original) const {
    return {original[perm[0]], original[perm[1]], original[perm[2]]};
  }

  friend bool operator==(const ChannelPermutation&, const ChannelPermutation&) = default;
};

/// True when the largest coefficient sits at index 1, the layout the
/// measurement-basis construction assumes.
inline bool is_canonical(const SchmidtChannel& ch) {
  return ch[1] >= ch[0] && ch[1] >= ch[2];
}

/// Moves the maximal coefficient to index 1 with a single transposition. If
/// a1 is already maximal (ties included) the identity is returned; otherwise
/// the first maximal index is swapped with 1.
inline std::pair<SchmidtChannel, ChannelPermutation> canonicalize(const SchmidtChannel& ch) {
  ChannelPermutation p;
  if (!is_canonical(ch)) {
    const int argmax = ch[0] >= ch[2] ? 0 : 2;
    std::swap(p.perm[1], p.perm[static_cast<std::size_t>(argmax)]);
  }
  const auto a = p.apply(ch.coefficients());
  return {SchmidtChannel::make(a[0], a[1], a[2]), p};
}

}  // namespace teleportsim
