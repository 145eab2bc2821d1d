// Copyright 2026 The OPMP Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "opmp/constraints.hpp"
#include "opmp/geometry.hpp"
#include "opmp/losses.hpp"

namespace opmp {

struct ComparatorOptions {
  int max_outer_iterations = 60;
  int max_inner_iterations = 20000;
  double inner_tolerance = 1e-12;
  // Target for max_k g_k(x*) before the segment polish.
  double feasibility_tolerance = 1e-10;
  // Accepted violation when no strictly feasible point is known.
  double accept_violation = 1e-8;
};

/// Best fixed decision in hindsight: argmin over base cap {g <= 0} of
/// sum_t f^t(x).
///
/// Solved by an augmented Lagrangian outer loop around accelerated projected
/// gradient, then made feasible by bisecting the segment towards the Slater
/// point (or the base center when it is strictly feasible). Throws
/// InfeasibleError naming the most violated constraint, or ConvergenceError.
Vector HindsightComparator(const LossSequence& losses,
                           const ConstraintBlock& constraints,
                           const BaseSet& base,
                           const ComparatorOptions& options = {});

}  // namespace opmp
