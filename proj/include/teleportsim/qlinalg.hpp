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

// Small dense complex linear algebra for qubit/qutrit states: tensor
// products, partial traces and the entropy functionals built on them.
// Storage and eigen-decomposition are delegated to Eigen.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <string>

#include "teleportsim/errors.hpp"
#include "teleportsim/numerics.hpp"

namespace teleportsim {

using Complex = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

inline constexpr Complex kI{0.0, 1.0};

// Dimensions of a bipartite system, first factor is the most significant
// index: |ij> has flat index i * second + j.
struct Dims {
  Eigen::Index first = 0;
  Eigen::Index second = 0;

  [[nodiscard]] Eigen::Index total() const { return first * second; }
};

enum class Subsystem { kFirst, kSecond };

inline CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline CVec kron(const CVec& a, const CVec& b) {
  CVec out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

// Computational basis vector |index> in dimension dim.
inline CVec basis_ket(Eigen::Index dim, Eigen::Index index) {
  CVec v = CVec::Zero(dim);
  v(index) = 1.0;
  return v;
}

inline bool is_normalized(const CVec& v, double tolerance = tol::kNormalization) {
  return std::abs(v.squaredNorm() - 1.0) <= tolerance;
}

inline double max_abs(const CMat& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool is_unitary(const CMat& m, double tolerance = tol::kUnitarity) {
  if (m.rows() != m.cols()) return false;
  const CMat defect = m.adjoint() * m - CMat::Identity(m.rows(), m.cols());
  return max_abs(defect) <= tolerance;
}

// Reshapes |state> on d1 x d2 into the d1 x d2 coefficient matrix M with
// |state> = sum_ij M_ij |i>|j>.
inline CMat coefficient_matrix(const CVec& state, Dims dims) {
  if (state.size() != dims.total()) {
    throw ValidationError("coefficient_matrix: state dimension " + std::to_string(state.size()) +
                          " does not match " + std::to_string(dims.first) + "x" +
                          std::to_string(dims.second));
  }
  CMat m(dims.first, dims.second);
  for (Eigen::Index i = 0; i < dims.first; ++i) {
    for (Eigen::Index j = 0; j < dims.second; ++j) m(i, j) = state(i * dims.second + j);
  }
  return m;
}

inline CMat reduced_density(const CVec& state, Dims dims, Subsystem keep) {
  if (state.size() != dims.total()) {
    throw ValidationError("reduced_density: dimension mismatch (" + std::to_string(state.size()) +
                          " != " + std::to_string(dims.first) + "*" +
                          std::to_string(dims.second) + ")");
  }
  if (!is_normalized(state)) {
    throw ValidationError("reduced_density: state is not normalized");
  }
  const CMat m = coefficient_matrix(state, dims);
  if (keep == Subsystem::kFirst) return m * m.adjoint();
  return (m.transpose() * m.conjugate()).eval();
}

inline bool is_hermitian(const CMat& m, double tolerance = tol::kHermitian) {
  return m.rows() == m.cols() && max_abs(m - m.adjoint()) <= tolerance;
}

// Eigenvalues of a Hermitian matrix in ascending order.
inline Eigen::VectorXd hermitian_eigenvalues(const CMat& m) {
  if (!is_hermitian(m)) throw ValidationError("hermitian_eigenvalues: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMat> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

// -x log2 x with the 0 log 0 = 0 convention.
inline double entropy_term(double x) { return x > 0.0 ? -x * std::log2(x) : 0.0; }

// Von Neumann entropy in bits.
inline double von_neumann_entropy(const CMat& rho) {
  const Eigen::VectorXd eigenvalues = hermitian_eigenvalues(rho);
  double entropy = 0.0;
  for (double lambda : eigenvalues) {
    if (lambda < -tol::kNegativeEigen) {
      throw DomainError("von_neumann_entropy: negative eigenvalue " + std::to_string(lambda));
    }
    entropy += entropy_term(lambda);
  }
  return std::clamp(entropy, 0.0, std::log2(static_cast<double>(rho.rows())));
}

inline double binary_entropy(double x) {
  if (std::isnan(x) || x < -tol::kEntropyDomain || x > 1.0 + tol::kEntropyDomain) {
    throw DomainError("binary_entropy: argument " + std::to_string(x) + " outside [0, 1]");
  }
  x = std::clamp(x, 0.0, 1.0);
  return entropy_term(x) + entropy_term(1.0 - x);
}

// Shannon entropy in bits of a probability vector. Entries are used as given;
// callers are responsible for normalization.
inline double shannon_entropy(std::span<const double> probabilities) {
  double h = 0.0;
  for (double p : probabilities) {
    if (p < -tol::kNegativeEigen) {
      throw DomainError("shannon_entropy: negative probability " + std::to_string(p));
    }
    h += entropy_term(p);
  }
  return h;
}

// Tangle (squared concurrence) of a pure qubit x qudit state, 4 det rho_A
// with rho_A the qubit marginal. Lies in [0, 1].
inline double qubit_tangle(const CVec& state, Eigen::Index partner_dim) {
  const CMat rho = reduced_density(state, Dims{2, partner_dim}, Subsystem::kFirst);
  const double det = (rho(0, 0) * rho(1, 1) - rho(0, 1) * rho(1, 0)).real();
  return std::clamp(4.0 * det, 0.0, 1.0);
}

inline double qubit_qutrit_tangle(const CVec& state) { return qubit_tangle(state, 3); }

// Entanglement entropy of a pure state whose qubit side has tangle C.
inline double entanglement_from_tangle(double tangle) {
  const double c = std::clamp(tangle, 0.0, 1.0);
  return binary_entropy((1.0 + std::sqrt(1.0 - c)) / 2.0);
}

}  // namespace teleportsim
