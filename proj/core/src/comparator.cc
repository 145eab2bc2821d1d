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

#include "opmp/comparator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>

#include <fmt/format.h>

#include "opmp/errors.hpp"

namespace opmp {

namespace {

// Averaged loss (1/T) sum_t f^t and its gradient.
class AveragedLoss {
 public:
  explicit AveragedLoss(const LossSequence& losses) : losses_(losses) {
    if (auto agg = losses.Aggregate()) {
      const double n = losses.horizon();
      model_ = DiagonalQuadratic{agg->curvature / n, agg->linear / n,
                                 agg->offset / n};
    }
  }

  double Value(const Vector& x) const {
    if (model_) return model_->Value(x);
    double total = 0.0;
    for (int t = 1; t <= losses_.horizon(); ++t) total += losses_.Value(t, x);
    return total / losses_.horizon();
  }

  Vector Gradient(const Vector& x) const {
    if (model_) return model_->Gradient(x);
    Vector total = Vector::Zero(x.size());
    for (int t = 1; t <= losses_.horizon(); ++t) {
      total += losses_.Gradient(t, x);
    }
    return total / losses_.horizon();
  }

 private:
  const LossSequence& losses_;
  std::optional<DiagonalQuadratic> model_;
};

struct Penalized {
  const AveragedLoss& loss;
  const ConstraintBlock& constraints;
  const Vector& multipliers;
  double weight;

  double Value(const Vector& x) const {
    double v = loss.Value(x);
    if (constraints.size() == 0) return v;
    const Vector g = constraints.Values(x);
    for (int k = 0; k < g.size(); ++k) {
      const double shifted = std::max(0.0, g[k] + multipliers[k] / weight);
      v += 0.5 * weight * shifted * shifted;
    }
    return v;
  }

  Vector Gradient(const Vector& x) const {
    Vector grad = loss.Gradient(x);
    if (constraints.size() == 0) return grad;
    const ConstraintEval eval = constraints.Eval(x);
    for (int k = 0; k < eval.values.size(); ++k) {
      const double shifted =
          std::max(0.0, eval.values[k] + multipliers[k] / weight);
      if (shifted > 0.0) {
        grad += weight * shifted * eval.jacobian.row(k).transpose();
      }
    }
    return grad;
  }
};

// FISTA with backtracking and adaptive restart. Returns the final iterate.
Vector MinimizeOverBase(const Penalized& objective, const BaseSet& base,
                        Vector x, const ComparatorOptions& options) {
  double lipschitz = 1.0;
  Vector y = x;
  Vector x_prev = x;
  double momentum = 1.0;
  for (int it = 0; it < options.max_inner_iterations; ++it) {
    const Vector grad = objective.Gradient(y);
    const double fy = objective.Value(y);
    Vector candidate;
    for (int backtrack = 0; backtrack < 60; ++backtrack) {
      candidate = Project(base, y - grad / lipschitz);
      const Vector step = candidate - y;
      const double model =
          fy + grad.dot(step) + 0.5 * lipschitz * step.squaredNorm();
      if (objective.Value(candidate) <= model + 1e-15 * std::abs(model)) break;
      lipschitz *= 2.0;
    }
    const double mapping = lipschitz * (candidate - y).norm();
    x_prev = x;
    x = candidate;
    if (mapping <= options.inner_tolerance) break;

    // Restart momentum when the objective goes up.
    if (objective.Value(x) > objective.Value(x_prev)) {
      momentum = 1.0;
      y = x;
      continue;
    }
    const double next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    y = Project(base, x + ((momentum - 1.0) / next) * (x - x_prev));
    momentum = next;
    lipschitz = std::max(lipschitz * 0.9, 1e-12);
  }
  return x;
}

double MaxViolation(const ConstraintBlock& constraints, const Vector& x,
                    int* worst = nullptr) {
  if (constraints.size() == 0) return -std::numeric_limits<double>::infinity();
  const Vector g = constraints.Values(x);
  Eigen::Index arg = 0;
  const double value = g.maxCoeff(&arg);
  if (worst) *worst = static_cast<int>(arg);
  return value;
}

std::optional<Vector> InteriorPoint(const ConstraintBlock& constraints,
                                    const BaseSet& base) {
  if (constraints.slater()) return constraints.slater()->point;
  Vector center = base.Center();
  if (MaxViolation(constraints, center) < 0.0) return center;
  return std::nullopt;
}

// Smallest s with max_k g((1 - s) x + s p) <= 0; g(p) < 0 and convexity make
// the feasible part of the segment an interval containing s = 1.
Vector PolishTowards(const ConstraintBlock& constraints, const Vector& x,
                     const Vector& interior) {
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (MaxViolation(constraints, (1.0 - mid) * x + mid * interior) <= 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return (1.0 - hi) * x + hi * interior;
}

}  // namespace

Vector HindsightComparator(const LossSequence& losses,
                           const ConstraintBlock& constraints,
                           const BaseSet& base,
                           const ComparatorOptions& options) {
  if (losses.dim() != base.dim() || constraints.dim() != base.dim()) {
    throw ArgumentError("comparator: dimension mismatch");
  }
  const AveragedLoss loss(losses);
  const int K = constraints.size();
  Vector multipliers = Vector::Zero(K);
  double weight = 10.0;
  Vector x = base.Center();

  double previous_violation = std::numeric_limits<double>::infinity();
  for (int outer = 0; outer < options.max_outer_iterations; ++outer) {
    const Penalized objective{loss, constraints, multipliers, weight};
    x = MinimizeOverBase(objective, base, x, options);
    if (K == 0) break;

    const Vector g = constraints.Values(x);
    const double violation = std::max(0.0, g.maxCoeff());
    const Vector updated = (multipliers + weight * g).cwiseMax(0.0);
    const double complementarity =
        (updated.array() * g.array()).abs().maxCoeff();
    multipliers = updated;
    if (violation <= options.feasibility_tolerance &&
        complementarity <= options.feasibility_tolerance) {
      break;
    }
    if (violation > 0.25 * previous_violation) weight *= 10.0;
    previous_violation = violation;
    if (weight > 1e14) break;
  }

  if (K > 0) {
    int worst = 0;
    const double violation = MaxViolation(constraints, x, &worst);
    if (violation > 0.0) {
      if (violation > 1e-6 && weight > 1e14) {
        throw InfeasibleError(
            fmt::format("comparator: constraints appear infeasible; constraint "
                        "{} violated by {}",
                        worst + 1, violation),
            worst);
      }
      if (auto interior = InteriorPoint(constraints, base)) {
        x = PolishTowards(constraints, x, *interior);
      } else if (violation > options.accept_violation) {
        throw ConvergenceError(
            fmt::format("comparator: residual violation {} and no strictly "
                        "feasible point to polish towards",
                        violation),
            violation);
      }
    }
  }
  return x;
}

}  // namespace opmp
