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

#include "opmp/algorithm.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include <fmt/format.h>

#include "opmp/errors.hpp"

namespace opmp {

namespace {

void RequireFiniteOracle(const Vector& v, const char* oracle, int t) {
  if (!v.allFinite()) {
    throw DataError(
        fmt::format("round {}: oracle '{}' returned non-finite values", t,
                    oracle));
  }
}

void CheckVariant(const Problem& problem, const HyperParams& hp,
                  Variant variant) {
  if (!(hp.eta > 0.0)) throw ArgumentError("eta must be positive");
  if (!(hp.gamma >= 0.0)) throw ArgumentError("gamma must be nonnegative");
  if (variant == Variant::kGeneral) {
    if (problem.geometry.kind() != GeometryKind::kEuclidean) {
      throw ArgumentError(
          "the general variant needs a bounded divergence; use the simplex "
          "variant for the entropic geometry");
    }
    return;
  }
  if (problem.geometry.kind() != GeometryKind::kEntropic ||
      problem.base.kind() != BaseSetKind::kSimplex) {
    throw ArgumentError("the simplex variant needs entropic geometry on the "
                        "simplex");
  }
  if (!hp.mixing || !(*hp.mixing > 0.0) || *hp.mixing > 1.0) {
    throw ArgumentError("the simplex variant needs a mixing weight in (0, 1]");
  }
}

RoundResult DoRound(const AlgoState& state, const Problem& problem,
                    const HyperParams& hp, Variant variant) {
  const int t = state.round + 1;
  if (t > problem.horizon()) {
    throw ArgumentError(fmt::format("round {} beyond loss horizon {}", t,
                                    problem.horizon()));
  }
  const ProblemConstants& pc = problem.constants;
  const ScheduleConstants sc = MakeScheduleConstants(pc, hp);

  // Dual update from g(x_{t-1}).
  Vector queue = QueueUpdate(state.queue, state.g_cur, hp.gamma);
  const double xi =
      XiValue(queue, hp.gamma, pc.constraint_smoothness, pc.constraint_bound,
              pc.constraint_lipschitz);
  const double alpha = AlphaUpdate(state.alpha, xi, sc, variant);
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw InternalError(fmt::format("round {}: alpha = {} violates the "
                                    "schedule",
                                    t, alpha));
  }

  const double nu = variant == Variant::kSimplex ? *hp.mixing : 0.0;
  const Vector anchor = variant == Variant::kSimplex
                            ? MixIterate(state.anchor, nu)
                            : state.anchor;

  // Linearized constraints: sum_k gamma (Q_k(t) + gamma g_k(x_{t-1})) grad g_k.
  const Vector weights = hp.gamma * (queue + hp.gamma * state.g_cur);
  const Vector constraint_direction = state.jac_cur.transpose() * weights;

  Vector x = problem.mirror_step(anchor, state.grad_cur + constraint_direction,
                                 alpha);
  RequireFiniteOracle(x, "mirror step", t);

  const double loss = problem.losses->Value(t, x);
  Vector grad = problem.losses->Gradient(t, x);
  RequireFiniteOracle(grad, "loss gradient", t);
  if (!std::isfinite(loss)) {
    throw DataError(fmt::format("round {}: oracle 'loss value' returned {}", t,
                                loss));
  }

  Vector anchor_next =
      problem.mirror_step(anchor, grad + constraint_direction, alpha);
  RequireFiniteOracle(anchor_next, "mirror step", t);

  ConstraintEval eval = problem.constraints.Eval(x);

  RoundResult result;
  RoundSnapshot& snap = result.snapshot;
  snap.t = t;
  snap.x_prev = state.x_cur;
  snap.x = x;
  snap.anchor = state.anchor;
  snap.anchor_next = anchor_next;
  if (variant == Variant::kSimplex) {
    snap.mixed = anchor;
    snap.mixed_next = MixIterate(anchor_next, nu);
  }
  snap.queue_prev = state.queue;
  snap.queue = queue;
  snap.queue_next = QueueUpdate(queue, eval.values, hp.gamma);
  snap.alpha = alpha;
  snap.xi = xi;
  snap.gamma = hp.gamma;
  snap.mixing = nu;
  snap.grad_prev = state.grad_cur;
  snap.grad = grad;
  snap.g_prev = state.g_cur;
  snap.g = eval.values;

  RoundOutput& out = result.output;
  out.t = t;
  out.decision = x;
  out.loss = loss;
  out.g_values = eval.values;
  out.g_fed = state.g_cur;
  out.queue = queue;
  out.queue_l1 = queue.lpNorm<1>();
  out.queue_l2 = queue.norm();
  out.alpha = alpha;
  out.xi = xi;
  if (variant == Variant::kSimplex) out.mixed = anchor;

  AlgoState& next = result.state;
  next.round = t;
  next.x_prev = state.x_cur;
  next.x_cur = std::move(x);
  next.anchor = std::move(anchor_next);
  if (variant == Variant::kSimplex) next.mixed = anchor;
  next.queue = std::move(queue);
  next.alpha = alpha;
  next.xi = xi;
  next.g_cur = std::move(eval.values);
  next.jac_cur = std::move(eval.jacobian);
  next.grad_cur = std::move(grad);
  return result;
}

}  // namespace

std::string_view ToString(Variant variant) {
  return variant == Variant::kGeneral ? "general" : "simplex";
}

HyperParams HyperParamsFromVariation(double variation_cap,
                                     double loss_smoothness, int horizon,
                                     Variant variant) {
  if (!(loss_smoothness > 0.0)) {
    throw ArgumentError("loss smoothness L_f must be positive");
  }
  if (!(variation_cap >= 0.0)) {
    throw ArgumentError("variation cap must be nonnegative");
  }
  if (horizon < 1) throw ArgumentError("horizon must be at least 1");
  const double scale =
      std::max(variation_cap, loss_smoothness * loss_smoothness);
  HyperParams hp;
  hp.eta = 1.0 / std::sqrt(scale);
  hp.gamma = std::pow(scale, 0.25);
  hp.variation_cap = variation_cap;
  if (variant == Variant::kSimplex) hp.mixing = 1.0 / horizon;
  return hp;
}

Vector QueueUpdate(const Vector& queue, const Vector& g_prev, double gamma) {
  if (queue.size() != g_prev.size()) {
    throw ArgumentError("queue and constraint vectors differ in length");
  }
  Vector next(queue.size());
  for (Eigen::Index k = 0; k < queue.size(); ++k) {
    const double push = gamma * g_prev[k];
    next[k] = std::max(-push, queue[k] + push);
  }
  return next;
}

double XiValue(const Vector& queue, double gamma, double constraint_smoothness,
               double constraint_bound, double constraint_lipschitz) {
  return gamma * constraint_smoothness * queue.lpNorm<1>() +
         gamma * gamma *
             (constraint_smoothness * constraint_bound +
              constraint_lipschitz * constraint_lipschitz);
}

ScheduleConstants MakeScheduleConstants(const ProblemConstants& constants,
                                        const HyperParams& hp) {
  return ScheduleConstants{constants.modulus,
                           hp.eta,
                           hp.gamma,
                           constants.loss_smoothness,
                           constants.constraint_smoothness,
                           constants.constraint_bound,
                           constants.constraint_lipschitz};
}

double AlphaBranch(double xi, const ScheduleConstants& c, Variant variant) {
  if (!(c.eta > 0.0)) throw ArgumentError("eta must be positive");
  const double smooth = c.eta * c.loss_smoothness * c.loss_smoothness;
  const double curvature = c.gamma * c.gamma * c.constraint_smoothness *
                           c.constraint_bound;
  if (variant == Variant::kGeneral) {
    return (2.0 / c.modulus) * (curvature + smooth + 1.0 / c.eta + xi);
  }
  return 3.0 * (smooth + curvature) + 2.0 / c.eta + 3.0 * xi;
}

double AlphaUpdate(double alpha_prev, double xi, const ScheduleConstants& c,
                   Variant variant) {
  return std::max(AlphaBranch(xi, c, variant), alpha_prev);
}

double AlphaClosedForm(double max_queue_l1, const ScheduleConstants& c,
                       Variant variant) {
  if (!(c.eta > 0.0)) throw ArgumentError("eta must be positive");
  const double g2 = c.gamma * c.gamma;
  const double lg_g = c.constraint_smoothness * c.constraint_bound;
  const double h2 = c.constraint_lipschitz * c.constraint_lipschitz;
  const double smooth = c.eta * c.loss_smoothness * c.loss_smoothness;
  const double queue_term = c.gamma * c.constraint_smoothness * max_queue_l1;
  if (variant == Variant::kGeneral) {
    return (2.0 / c.modulus) * (smooth + g2 * (2.0 * lg_g + h2)) +
           2.0 / (c.modulus * c.eta) + (2.0 / c.modulus) * queue_term;
  }
  return 3.0 * (smooth + g2 * lg_g) + 2.0 / c.eta + 3.0 * g2 * (lg_g + h2) +
         3.0 * queue_term;
}

Vector MixIterate(const Vector& x, double nu) {
  const double d = static_cast<double>(x.size());
  return ((1.0 - nu) * x.array() + nu / d).matrix();
}

AlgoState InitialState(const Problem& problem) {
  AlgoState s;
  s.round = 0;
  s.x_cur = problem.base.Center();
  s.x_prev = s.x_cur;
  s.anchor = s.x_cur;
  s.queue = Vector::Zero(problem.num_constraints());
  ConstraintEval eval = problem.constraints.Eval(s.x_cur);
  s.g_cur = std::move(eval.values);
  s.jac_cur = std::move(eval.jacobian);
  // f^0 is taken to be f^1.
  s.grad_cur = problem.losses->Gradient(0, s.x_cur);
  RequireFiniteOracle(s.grad_cur, "loss gradient", 0);
  return s;
}

RoundResult RoundGeneral(const AlgoState& state, const Problem& problem,
                         const HyperParams& hp) {
  CheckVariant(problem, hp, Variant::kGeneral);
  return DoRound(state, problem, hp, Variant::kGeneral);
}

RoundResult RoundSimplex(const AlgoState& state, const Problem& problem,
                         const HyperParams& hp) {
  CheckVariant(problem, hp, Variant::kSimplex);
  return DoRound(state, problem, hp, Variant::kSimplex);
}

RunTrace Run(Variant variant, const Problem& problem, const HyperParams& hp,
             int rounds, const RunOptions& options) {
  if (rounds < 0) throw ArgumentError("number of rounds must be >= 0");
  if (rounds > problem.horizon()) {
    throw ArgumentError(fmt::format("{} rounds requested but the loss horizon "
                                    "is {}",
                                    rounds, problem.horizon()));
  }
  CheckVariant(problem, hp, variant);

  RunTrace trace;
  trace.gamma = hp.gamma;
  trace.mixing = variant == Variant::kSimplex ? *hp.mixing : 0.0;
  trace.num_constraints = problem.num_constraints();
  trace.rounds.reserve(rounds);
  if (options.keep_snapshots) trace.snapshots.reserve(rounds);

  AlgoState state = InitialState(problem);
  for (int t = 1; t <= rounds; ++t) {
    RoundResult result;
    try {
      result = DoRound(state, problem, hp, variant);
    } catch (const DataError& e) {
      throw DataError(fmt::format("run failed at round {}: {}", t, e.what()));
    } catch (const InternalError& e) {
      throw InternalError(
          fmt::format("run failed at round {}: {}", t, e.what()));
    } catch (const DomainError& e) {
      throw DomainError(fmt::format("run failed at round {}: {}", t, e.what()));
    }
    trace.rounds.push_back(std::move(result.output));
    if (options.keep_snapshots) {
      trace.snapshots.push_back(std::move(result.snapshot));
    }
    state = std::move(result.state);
  }
  trace.final_queue = QueueUpdate(state.queue, state.g_cur, hp.gamma);
  return trace;
}

}  // namespace opmp
