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

#include "opmp/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include <fmt/format.h>

#include "opmp/errors.hpp"

namespace opmp {

namespace {

void CheckParams(const BaselineParams& params) {
  if (!(params.step > 0.0) || !std::isfinite(params.step)) {
    throw ArgumentError("baseline step must be positive");
  }
  if (!(params.dual_step >= 0.0) || !(params.shrink >= 0.0)) {
    throw ArgumentError("baseline dual_step and shrink must be nonnegative");
  }
}

}  // namespace

RoundResult BaselinePdRound(const AlgoState& state, const Problem& problem,
                            const BaselineParams& params) {
  CheckParams(params);
  const int t = state.round + 1;
  if (t > problem.horizon()) {
    throw ArgumentError(fmt::format("round {} beyond loss horizon {}", t,
                                    problem.horizon()));
  }
  const double s = params.step / std::sqrt(static_cast<double>(t));
  const double alpha = 1.0 / s;

  const Vector direction =
      state.grad_cur + state.jac_cur.transpose() * state.queue;
  Vector x = problem.mirror_step(state.x_cur, direction, alpha);
  const double loss = problem.losses->Value(t, x);
  Vector grad = problem.losses->Gradient(t, x);
  if (!grad.allFinite() || !std::isfinite(loss)) {
    throw DataError(fmt::format("round {}: oracle 'loss gradient' returned "
                                "non-finite values",
                                t));
  }
  ConstraintEval eval = problem.constraints.Eval(x);

  Vector lambda(state.queue.size());
  const double keep = std::max(0.0, 1.0 - params.shrink * s);
  for (Eigen::Index k = 0; k < lambda.size(); ++k) {
    lambda[k] = std::max(
        0.0, keep * state.queue[k] + params.dual_step * s * eval.values[k]);
  }

  RoundResult result;
  RoundSnapshot& snap = result.snapshot;
  snap.t = t;
  snap.x_prev = state.x_cur;
  snap.x = x;
  snap.anchor = state.x_cur;
  snap.anchor_next = x;
  snap.queue_prev = state.queue;
  snap.queue = lambda;
  snap.queue_next = lambda;
  snap.alpha = alpha;
  snap.grad_prev = state.grad_cur;
  snap.grad = grad;
  snap.g_prev = state.g_cur;
  snap.g = eval.values;

  RoundOutput& out = result.output;
  out.t = t;
  out.decision = x;
  out.loss = loss;
  out.g_values = eval.values;
  out.g_fed = eval.values;
  out.queue = lambda;
  out.queue_l1 = lambda.lpNorm<1>();
  out.queue_l2 = lambda.norm();
  out.alpha = alpha;

  AlgoState& next = result.state;
  next.round = t;
  next.x_prev = state.x_cur;
  next.x_cur = x;
  next.anchor = std::move(x);
  next.queue = std::move(lambda);
  next.alpha = alpha;
  next.g_cur = std::move(eval.values);
  next.jac_cur = std::move(eval.jacobian);
  next.grad_cur = std::move(grad);
  return result;
}

RunTrace RunBaseline(const Problem& problem, const BaselineParams& params,
                     int rounds, const RunOptions& options) {
  CheckParams(params);
  if (rounds < 0 || rounds > problem.horizon()) {
    throw ArgumentError(fmt::format("{} rounds requested, horizon is {}",
                                    rounds, problem.horizon()));
  }
  RunTrace trace;
  trace.num_constraints = problem.num_constraints();
  AlgoState state = InitialState(problem);
  for (int t = 1; t <= rounds; ++t) {
    RoundResult result;
    try {
      result = BaselinePdRound(state, problem, params);
    } catch (const DataError& e) {
      throw DataError(fmt::format("run failed at round {}: {}", t, e.what()));
    }
    trace.rounds.push_back(std::move(result.output));
    if (options.keep_snapshots) {
      trace.snapshots.push_back(std::move(result.snapshot));
    }
    state = std::move(result.state);
  }
  trace.final_queue = state.queue;
  return trace;
}

}  // namespace opmp
