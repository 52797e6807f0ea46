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

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "teleportsim/numerics.hpp"

namespace teleportsim {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: wrong dimensions, unnormalized states, negative
// coefficients and the like.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A function was evaluated outside its mathematical domain.
class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// The perfect-teleportation constraints have no solution for the requested
// parameters. Carries whatever admissible set the solver could determine.
class InfeasibleError : public Error {
 public:
  explicit InfeasibleError(const std::string& what, std::vector<Interval> admissible = {})
      : Error(what), admissible_(std::move(admissible)) {}

  [[nodiscard]] const std::vector<Interval>& admissible() const { return admissible_; }

 private:
  std::vector<Interval> admissible_;
};

// The channel itself cannot teleport a qubit perfectly (max a_j^2 > 1/2).
class CapabilityError : public InfeasibleError {
 public:
  using InfeasibleError::InfeasibleError;
};

// A branch violates the equal-weight or orthogonality condition, so no
// unitary on Bob's side restores the input.
class NotCorrectableError : public Error {
 public:
  using Error::Error;
};

}  // namespace teleportsim
