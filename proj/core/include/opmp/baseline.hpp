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

#include "opmp/algorithm.hpp"
#include "opmp/problem.hpp"
#include "opmp/trace.hpp"

namespace opmp {

/// Gradient-update primal-dual baseline, kept for comparison runs.
///
/// Primal: x_t = argmin <h, x> + D(x, x_{t-1}) / s_t with
/// h = grad f^{t-1}(x_{t-1}) + sum_k lambda_k grad g_k(x_{t-1}) and
/// s_t = step / sqrt(t). Dual, after observing g(x_t):
/// lambda <- max{0, (1 - shrink s_t) lambda + dual_step s_t g(x_t)}.
struct BaselineParams {
  double step = 0.1;
  double dual_step = 1.0;
  double shrink = 0.0;

  bool operator==(const BaselineParams&) const = default;
};

/// Uses AlgoState with queue = lambda and alpha = 1 / s_t.
RoundResult BaselinePdRound(const AlgoState& state, const Problem& problem,
                            const BaselineParams& params);

RunTrace RunBaseline(const Problem& problem, const BaselineParams& params,
                     int rounds, const RunOptions& options = {});

}  // namespace opmp
