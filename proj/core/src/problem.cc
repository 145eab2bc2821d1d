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

#include "opmp/problem.hpp"

#include <cmath>
#include <utility>

#include <fmt/format.h>

#include "opmp/errors.hpp"

namespace opmp {

namespace {

double Pick(const std::optional<double>& override_value, double derived,
            const char* name) {
  if (!override_value) return derived;
  if (!(*override_value >= 0.0) || !std::isfinite(*override_value)) {
    throw ArgumentError(fmt::format("constant override {} must be finite and "
                                    "nonnegative",
                                    name));
  }
  return *override_value;
}

}  // namespace

Problem MakeProblem(Geometry geometry, BaseSet base, ConstraintBlock constraints,
                    LossSequencePtr losses, const ConstantOverrides& overrides) {
  CheckCompatible(geometry, base);
  if (!losses) throw ArgumentError("problem needs a loss sequence");
  if (losses->dim() != base.dim() || constraints.dim() != base.dim()) {
    throw ArgumentError(fmt::format(
        "dimension mismatch: base {}, losses {}, constraints {}", base.dim(),
        losses->dim(), constraints.dim()));
  }

  ProblemConstants c;
  c.modulus = geometry.modulus();

  const bool need_constraint_constants = !overrides.constraint_bound ||
                                         !overrides.constraint_lipschitz ||
                                         !overrides.constraint_smoothness;
  if (need_constraint_constants) {
    const ConstraintConstants derived =
        BuiltinConstants(constraints, geometry, base);
    c.constraint_bound = derived.G();
    c.constraint_lipschitz = derived.H();
    c.constraint_smoothness = derived.gradient_lipschitz;
  }
  c.constraint_bound = Pick(overrides.constraint_bound, c.constraint_bound, "G");
  c.constraint_lipschitz =
      Pick(overrides.constraint_lipschitz, c.constraint_lipschitz, "H");
  c.constraint_smoothness =
      Pick(overrides.constraint_smoothness, c.constraint_smoothness, "L_g");

  const LossConstants loss = losses->Constants(geometry, base);
  c.loss_gradient_bound =
      Pick(overrides.loss_gradient_bound, loss.gradient_bound, "F");
  const double smoothness = loss.gradient_lipschitz > 0.0
                                ? loss.gradient_lipschitz
                                : kDefaultLossSmoothness;
  c.loss_smoothness = Pick(overrides.loss_smoothness, smoothness, "L_f");

  MirrorStepFn step = DefaultMirrorStep(geometry, base);
  return Problem{std::move(geometry), std::move(base), std::move(constraints),
                 std::move(losses),   c,               std::move(step)};
}

}  // namespace opmp
