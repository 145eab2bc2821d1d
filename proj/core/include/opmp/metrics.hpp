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

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "opmp/constraints.hpp"
#include "opmp/geometry.hpp"
#include "opmp/losses.hpp"
#include "opmp/trace.hpp"

namespace opmp {

// Comparators further than this outside {g <= 0} are rejected by Regret.
inline constexpr double kComparatorFeasibilityTolerance = 1e-6;

/// sum_t f^t(x_t) - sum_t f^t(x*), with f^t re-evaluated from the sequence.
double Regret(const RunTrace& trace, const Vector& comparator,
              const LossSequence& losses, const ConstraintBlock& constraints);

/// sum_t g_k(x_t) for 1 <= k <= K. Unclipped, so it may be negative.
double Violation(const RunTrace& trace, int k);
/// sum_t max{g_k(x_t), 0} for 1 <= k <= K.
double ClippedViolation(const RunTrace& trace, int k);
// All K violations; entry k-1 is Violation(trace, k).
Vector Violations(const RunTrace& trace);
// max_k Violation(T, k), or 0 without constraints.
double MaxViolation(const RunTrace& trace);
double MaxClippedViolation(const RunTrace& trace);

struct ViolationBound {
  bool holds = false;
  double bound = 0.0;          // |Q(T+1)|_2 / gamma
  double max_violation = 0.0;
  double slack = 0.0;          // bound - max_violation
};

/// max_k Violation(T, k) <= |Q(T+1)|_2 / gamma + 1e-9.
ViolationBound ViolationBoundCheck(const RunTrace& trace, double gamma);

/// Sampled lower estimate of the gradient variation: for t >= 2 the max of
/// |grad f^t(x) - grad f^{t-1}(x)|_*^2 over `sample_budget` uniform points
/// together with the played decisions x_{t-1} and x_t.
double EmpiricalVariation(const RunTrace& trace, const LossSequence& losses,
                          const Geometry& geom, const BaseSet& base,
                          int sample_budget, std::uint64_t seed);

struct MetricsReport {
  double regret = 0.0;
  Vector violation;
  Vector clipped_violation;
  double v_empirical = 0.0;
  double queue_bound = 0.0;
  ViolationBound bound_check;
};

struct SummaryRow {
  std::string scenario_id;
  int horizon = 0;
  double regret = 0.0;
  double max_violation = 0.0;
  double queue_bound = 0.0;
  double v_cap = 0.0;
  double v_empirical = 0.0;
};

// Shortest decimal text that reads back to the same double.
std::string FormatDouble(double value);

/// Columns: t, loss, cum_loss, g_1..g_K, cum_g_1..cum_g_K, q_l1, q_l2, alpha,
/// xi.
void WriteRoundCsv(std::ostream& out, const RunTrace& trace);
std::string RoundCsv(const RunTrace& trace);

// scenario_id, T, regret, max_violation, queue_bound, V_cap, V_empirical
void WriteSummaryHeader(std::ostream& out);
void WriteSummaryRow(std::ostream& out, const SummaryRow& row);

}  // namespace opmp
