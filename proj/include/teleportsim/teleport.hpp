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

// Exact state-vector run of the protocol: joint state, projection onto
// Alice's basis, Bob's corrections and per-branch fidelities.

#include <array>
#include <cmath>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "teleportsim/channel.hpp"
#include "teleportsim/errors.hpp"
#include "teleportsim/qlinalg.hpp"
#include "teleportsim/scheme.hpp"

namespace teleportsim {

/// alpha|0> + beta|1>.
struct InputQubit {
  Complex alpha{1.0, 0.0};
  Complex beta{0.0, 0.0};

  static InputQubit make(Complex alpha, Complex beta) {
    const double n = std::norm(alpha) + std::norm(beta);
    if (!std::isfinite(n) || std::abs(n - 1.0) > tol::kNormalization) {
      throw ValidationError("input qubit is not normalized: |alpha|^2 + |beta|^2 = " + std::to_string(n));
    }
    return {alpha, beta};
  }

  [[nodiscard]] CVec ket() const {
    CVec v(2);
    v << alpha, beta;
    return v;
  }

  /// alpha|0> + beta|1> embedded in dimension dim.
  [[nodiscard]] CVec embedded(Eigen::Index dim) const {
    CVec v = CVec::Zero(dim);
    v(0) = alpha;
    v(1) = beta;
    return v;
  }
};

/// Haar-random pure qubit from two complex normal deviates.
inline InputQubit haar_random_qubit(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  for (;;) {
    const Complex a(normal(rng), normal(rng));
    const Complex b(normal(rng), normal(rng));
    const double n = std::sqrt(std::norm(a) + std::norm(b));
    if (n > 1e-12) return {a / n, b / n};
  }
}

/// sum_j a_j |jj>.
inline CVec entangled_pair(std::span<const double> schmidt) {
  const auto d = static_cast<Eigen::Index>(schmidt.size());
  CVec v = CVec::Zero(d * d);
  for (Eigen::Index j = 0; j < d; ++j) v(j * d + j) = schmidt[static_cast<std::size_t>(j)];
  return v;
}

/// |phi>_1 (x) |Phi>_23 with index order (qubit 1, qudit 2, qudit 3).
inline CVec total_state(const InputQubit& in, std::span<const double> schmidt) {
  return kron(in.ket(), entangled_pair(schmidt));
}

inline CVec total_state(const InputQubit& in, const SchmidtChannel& ch) {
  return total_state(in, std::span<const double>(ch.coefficients()));
}

/// (<psi|_12 (x) 1_3)|total>: Bob's unnormalized conditional state.
inline CVec project_alice(const CVec& total, const CVec& alice, Eigen::Index bob_dim) {
  if (total.size() != alice.size() * bob_dim) {
    throw ValidationError("project_alice: dimension mismatch");
  }
  CVec out = CVec::Zero(bob_dim);
  for (Eigen::Index k = 0; k < alice.size(); ++k) {
    const Complex w = std::conj(alice(k));
    if (w == Complex{}) continue;
    out += w * total.segment(k * bob_dim, bob_dim);
  }
  return out;
}

/// One outcome of Alice's measurement. `correction` is empty until a scheme
/// is attached (run_teleport fills it).
struct OutcomeBranch {
  std::string label;
  CVec basis_vector;
  double probability = 0.0;
  CVec collapsed;
  CMat correction;
};

inline std::vector<OutcomeBranch> measure_branches(const CVec& total, const MeasurementBasis& basis) {
  if (!basis.is_orthonormal()) throw ValidationError("measure_branches: basis is not orthonormal");
  if (total.size() % basis.dims.total() != 0) {
    throw ValidationError("measure_branches: state does not factor over the basis dimension");
  }
  const Eigen::Index bob_dim = total.size() / basis.dims.total();
  std::vector<OutcomeBranch> branches;
  branches.reserve(basis.size());
  for (std::size_t k = 0; k < basis.size(); ++k) {
    OutcomeBranch b;
    b.label = basis.labels[k];
    b.basis_vector = basis.vectors[k];
    b.collapsed = project_alice(total, basis.vectors[k], bob_dim);
    b.probability = b.collapsed.squaredNorm();
    branches.push_back(std::move(b));
  }
  return branches;
}

/// Bob's conditional state split by input amplitude: collapsed =
/// alpha * phi_alpha + beta * phi_beta.
struct BranchStructure {
  CVec phi_alpha;
  CVec phi_beta;
};

inline std::vector<BranchStructure> branch_structures(const MeasurementBasis& basis,
                                                      std::span<const double> schmidt) {
  const auto bob_dim = static_cast<Eigen::Index>(schmidt.size());
  const CVec zero = total_state(InputQubit{1.0, 0.0}, schmidt);
  const CVec one = total_state(InputQubit{0.0, 1.0}, schmidt);
  std::vector<BranchStructure> out;
  out.reserve(basis.size());
  for (const CVec& v : basis.vectors) {
    out.push_back({project_alice(zero, v, bob_dim), project_alice(one, v, bob_dim)});
  }
  return out;
}

/// Unitary W with W phi_alpha ∝ |0> and W phi_beta ∝ |1>, both with the same
/// positive factor. Remaining rows complete W by Gram-Schmidt over the
/// computational basis, each phased so its first nonzero entry is real and
/// positive. A branch that never occurs (both parts zero) gets the identity.
inline CMat correction_unitary(const CVec& phi_alpha, const CVec& phi_beta) {
  const Eigen::Index d = phi_alpha.size();
  if (phi_beta.size() != d || d < 2) throw ValidationError("correction_unitary: bad dimensions");
  const double na = phi_alpha.norm();
  const double nb = phi_beta.norm();
  if (na * na <= tol::kUnreachable && nb * nb <= tol::kUnreachable) {
    return CMat::Identity(d, d);
  }
  const double weight_gap = std::abs(na * na - nb * nb);
  const double overlap = std::abs(phi_alpha.dot(phi_beta));
  if (weight_gap > tol::kCorrectable || overlap > tol::kCorrectable) {
    throw NotCorrectableError("branch is not perfectly correctable: weight gap " + std::to_string(weight_gap) +
                              ", overlap " + std::to_string(overlap));
  }
  std::vector<CVec> rows{phi_alpha / na, phi_beta / nb};
  while (static_cast<Eigen::Index>(rows.size()) < d) {
    CVec best;
    double best_norm = -1.0;
    for (Eigen::Index e = 0; e < d; ++e) {
      CVec v = basis_ket(d, e);
      for (const CVec& r : rows) v -= r.dot(v) * r;
      if (v.norm() > best_norm + 1e-12) {
        best_norm = v.norm();
        best = v;
      }
    }
    best /= best_norm;
    for (Eigen::Index e = 0; e < d; ++e) {
      if (std::abs(best(e)) > 1e-12) {
        best *= std::abs(best(e)) / best(e);
        break;
      }
    }
    rows.push_back(best);
  }
  CMat w(d, d);
  for (Eigen::Index k = 0; k < d; ++k) w.row(k) = rows[static_cast<std::size_t>(k)].adjoint();
  return w;
}

inline CMat correction_unitary(const BranchStructure& s) {
  return correction_unitary(s.phi_alpha, s.phi_beta);
}

struct TeleportReport {
  std::vector<OutcomeBranch> branches;
  std::vector<double> fidelities;
  double mean_fidelity = 0.0;  // probability-weighted
  double min_fidelity = 0.0;   // over branches that occur
};

/// Runs the protocol for an arbitrary basis on qubit (x) qudit. Branches
/// with zero probability report fidelity 1 (they never occur).
inline TeleportReport teleport_with_basis(const InputQubit& in, std::span<const double> schmidt,
                                          const MeasurementBasis& basis) {
  const auto bob_dim = static_cast<Eigen::Index>(schmidt.size());
  if (basis.dims.second != bob_dim) {
    throw ValidationError("teleport_with_basis: basis and channel dimensions differ");
  }
  const auto structures = branch_structures(basis, schmidt);
  TeleportReport report;
  report.branches = measure_branches(total_state(in, schmidt), basis);
  report.min_fidelity = 1.0;
  const CVec target = in.embedded(bob_dim);
  for (std::size_t k = 0; k < report.branches.size(); ++k) {
    OutcomeBranch& b = report.branches[k];
    b.correction = correction_unitary(structures[k]);
    double fidelity = 1.0;
    if (b.probability > tol::kUnreachable) {
      fidelity = std::norm(target.dot(b.correction * b.collapsed)) / b.probability;
      report.min_fidelity = std::min(report.min_fidelity, fidelity);
    }
    report.fidelities.push_back(fidelity);
    report.mean_fidelity += b.probability * fidelity;
  }
  return report;
}

inline TeleportReport run_teleport(const InputQubit& in, const SchmidtChannel& ch, const SchemeParams& params) {
  if (!is_teleport_capable(ch)) {
    throw CapabilityError("channel cannot teleport a qubit perfectly: max a_j^2 exceeds 1/2");
  }
  return teleport_with_basis(in, std::span<const double>(ch.coefficients()), measurement_basis(params));
}

// ---------------------------------------------------------------------------
// Closed forms for the qutrit scheme, written directly in terms of U, the
// phases and the channel. Used as the reference the raw projection is
// checked against.

/// Bob's conditional states for the labels 1+, 2+, 3+, 1-, 2-, 3-.
inline std::array<CVec, 6> collapsed_closed_form(const InputQubit& in, const SchmidtChannel& ch,
                                                 const SchemeParams& p) {
  const Rotation u = rotation_from_angles(p.theta);
  const Complex e1 = std::exp(-kI * p.delta[0]);
  const Complex e2 = std::exp(-kI * p.delta[1]);
  const double a0 = ch[0];
  const double a1 = ch[1];
  const double a2 = ch[2];
  const Complex al = in.alpha;
  const Complex be = in.beta;
  const double r = 1.0 / std::sqrt(2.0);
  auto ket = [](Complex x0, Complex x1, Complex x2) {
    CVec v(3);
    v << x0, x1, x2;
    return v;
  };
  std::array<CVec, 6> out;
  for (int k = 0; k < 2; ++k) {
    // first row of U feeds the + pair, second row the - pair
    const int row = k;
    out[k == 0 ? 0 : 3] = ket(al * a0 * u(row, 0), be * a1 * u(row, 1), al * a2 * u(row, 2));
    out[k == 0 ? 1 : 4] = ket(be * a0 * u(row, 0), al * a1 * u(row, 1) * e1, be * a2 * u(row, 2) * e2);
  }
  for (int sign : {+1, -1}) {
    const double sg = sign;
    const CVec v = r * (al * ket(sg * a0 * u(2, 0), a1 * u(2, 1) * e1, sg * a2 * u(2, 2)) +
                        be * ket(a0 * u(2, 0), sg * a1 * u(2, 1), a2 * u(2, 2) * e2));
    out[sign > 0 ? 2 : 5] = v;
  }
  return out;
}

/// Outcome probabilities for the labels 1+, 2+, 3+, 1-, 2-, 3- of a solved
/// scheme (they do not depend on the input).
inline std::array<double, 6> probabilities_closed_form(const SchmidtChannel& ch, const SchemeParams& p) {
  const Rotation u = rotation_from_angles(p.theta);
  const auto a2 = ch.squared();
  const double p1 = a2[0] * u(0, 0) * u(0, 0) + a2[2] * u(0, 2) * u(0, 2);
  const double m1 = a2[0] * u(1, 0) * u(1, 0) + a2[2] * u(1, 2) * u(1, 2);
  const double p3 = 0.5 * (a2[0] * u(2, 0) * u(2, 0) + a2[1] * u(2, 1) * u(2, 1) + a2[2] * u(2, 2) * u(2, 2));
  return {p1, p1, p3, m1, m1, p3};
}

}  // namespace teleportsim
