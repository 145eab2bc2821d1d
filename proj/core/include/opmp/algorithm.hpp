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
#include <string_view>

#include "opmp/geometry.hpp"
#include "opmp/problem.hpp"
#include "opmp/trace.hpp"

namespace opmp {

/// kGeneral: bounded-divergence geometries (Euclidean ball/box).
/// kSimplex: entropic geometry on the simplex with iterate mixing.
enum class Variant { kGeneral, kSimplex };

std::string_view ToString(Variant variant);

struct HyperParams {
  double eta = 1.0;
  double gamma = 1.0;
  std::optional<double> mixing;  // nu, simplex variant only
  double variation_cap = 0.0;
};

/// eta = max{V, L_f^2}^{-1/2}, gamma = max{V, L_f^2}^{1/4}, and nu = 1/T
/// for the simplex variant.
HyperParams HyperParamsFromVariation(double variation_cap,
                                     double loss_smoothness, int horizon,
                                     Variant variant);

/// Q_k(t) = max{-gamma g_k, Q_k(t-1) + gamma g_k}, componentwise.
Vector QueueUpdate(const Vector& queue, const Vector& g_prev, double gamma);

/// xi = gamma L_g |Q|_1 + gamma^2 (L_g G + H^2).
double XiValue(const Vector& queue, double gamma, double constraint_smoothness,
               double constraint_bound, double constraint_lipschitz);

struct ScheduleConstants {
  double modulus = 1.0;
  double eta = 1.0;
  double gamma = 1.0;
  double loss_smoothness = 0.0;
  double constraint_smoothness = 0.0;
  double constraint_bound = 0.0;
  double constraint_lipschitz = 0.0;
};

ScheduleConstants MakeScheduleConstants(const ProblemConstants& constants,
                                        const HyperParams& hp);

// The first argument of the max in the alpha recursion.
double AlphaBranch(double xi, const ScheduleConstants& c, Variant variant);

/// alpha_t = max{branch(xi_t), alpha_{t-1}}.
///
/// General: branch = (2/rho)(gamma^2 L_g G + eta L_f^2 + 1/eta + xi).
/// Simplex: branch = 3(eta L_f^2 + gamma^2 L_g G) + 2/eta + 3 xi.
double AlphaUpdate(double alpha_prev, double xi, const ScheduleConstants& c,
                   Variant variant);

/// Non-recursive form of the same schedule in terms of max_{t' <= t} |Q(t')|_1.
double AlphaClosedForm(double max_queue_l1, const ScheduleConstants& c,
                       Variant variant);

/// y = (1 - nu) x + (nu / d) 1.
Vector MixIterate(const Vector& x, double nu);

/// State between rounds. After round t (t = 0 before the first round):
/// x_cur = x_t, x_prev = x_{t-1}, anchor = x~_{t+1}, queue = Q(t),
/// g_cur/jac_cur = g(x_t)/grad g(x_t), grad_cur = grad f^t(x_t).
struct AlgoState {
  int round = 0;
  Vector x_prev;
  Vector x_cur;
  Vector anchor;
  Vector mixed;  // y~_t of the last round, simplex variant only
  Vector queue;
  double alpha = 0.0;
  double xi = 0.0;
  Vector g_cur;
  Matrix jac_cur;
  Vector grad_cur;
};

using RoundOutput = RoundRecord;

struct RoundResult {
  AlgoState state;
  RoundOutput output;
  RoundSnapshot snapshot;
};

/// x_0 = x_1 = x~_1 = base center, Q(0) = 0, alpha_0 = 0.
AlgoState InitialState(const Problem& problem);

/// One round of the online primal-dual mirror prox method: queue update,
/// alpha/xi update, primal mirror step from x~_t, play x_t, then the
/// intermediate mirror step from the same anchor with the fresh gradient.
RoundResult RoundGeneral(const AlgoState& state, const Problem& problem,
                         const HyperParams& hp);

/// Same round on the simplex with KL steps anchored at the mixed iterate
/// y~_t = (1 - nu) x~_t + nu / d.
RoundResult RoundSimplex(const AlgoState& state, const Problem& problem,
                         const HyperParams& hp);

struct RunOptions {
  bool keep_snapshots = false;
};

/// Runs `rounds` rounds (at most the loss horizon). Deterministic.
RunTrace Run(Variant variant, const Problem& problem, const HyperParams& hp,
             int rounds, const RunOptions& options = {});

}  // namespace opmp
