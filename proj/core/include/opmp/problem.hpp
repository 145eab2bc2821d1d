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

#include <optional>

#include "opmp/constraints.hpp"
#include "opmp/geometry.hpp"
#include "opmp/losses.hpp"

namespace opmp {

// Smoothness assumed for losses whose gradients do not depend on x (any
// positive value is a valid Lipschitz constant there).
inline constexpr double kDefaultLossSmoothness = 1.0;

/// Every constant the step-size schedule needs, in the geometry's norms.
struct ProblemConstants {
  double loss_gradient_bound = 0.0;          // F
  double loss_smoothness = 0.0;              // L_f
  double constraint_bound = 0.0;             // G = sum_k sup |g_k|
  double constraint_lipschitz = 0.0;         // H = sum_k H_k
  double constraint_smoothness = 0.0;        // L_g
  double modulus = 1.0;                      // rho
};

struct ConstantOverrides {
  std::optional<double> loss_gradient_bound;
  std::optional<double> loss_smoothness;
  std::optional<double> constraint_bound;
  std::optional<double> constraint_lipschitz;
  std::optional<double> constraint_smoothness;

  bool operator==(const ConstantOverrides&) const = default;
};

/// A fully specified constrained online problem.
struct Problem {
  Geometry geometry;
  BaseSet base;
  ConstraintBlock constraints;
  LossSequencePtr losses;
  ProblemConstants constants;
  MirrorStepFn mirror_step;

  int dim() const { return base.dim(); }
  int num_constraints() const { return constraints.size(); }
  int horizon() const { return losses->horizon(); }
};

/// Validates compatibility, derives constants from the built-in families and
/// applies overrides. Overrides are required for custom constraints.
Problem MakeProblem(Geometry geometry, BaseSet base, ConstraintBlock constraints,
                    LossSequencePtr losses,
                    const ConstantOverrides& overrides = {});

}  // namespace opmp
