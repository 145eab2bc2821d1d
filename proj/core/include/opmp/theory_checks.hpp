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

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "opmp/algorithm.hpp"
#include "opmp/geometry.hpp"
#include "opmp/losses.hpp"
#include "opmp/problem.hpp"
#include "opmp/sampling.hpp"
#include "opmp/trace.hpp"

namespace opmp {

/// Outcome of one numerical inequality check.
///
/// max_residual is the largest LHS - RHS seen (negative when every instance
/// has slack) and pass holds iff max_residual <= tolerance.
struct CheckReport {
  std::string name;
  int rounds = 0;
  int samples = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  int skipped = 0;  // instances where the inequality is vacuous

  void Record(double residual);
  void Merge(const CheckReport& other);
};

CheckReport MakeReport(std::string name, double tolerance);

/// Queue properties of every update in the trace, including Q(T+1):
///   queue_nonneg        Q_k >= 0 (exact)
///   queue_pushed_nonneg Q_k(t) + gamma g_k >= 0 with the update's input g
///                       (exact)
///   queue_drift         (|Q(t+1)|^2 - |Q(t)|^2)/2 <= gamma <Q(t), g>
///                       + gamma^2 |g|^2 (1e-9)
///   queue_l2_growth     |Q(t+1)|_2 <= |Q(t)|_2 + gamma |g|_2 (1e-9)
///   queue_l1_change     ||Q(t+1)|_1 - |Q(t)|_1| <= gamma |g|_1 (1e-9)
/// where g is the constraint vector consumed by that update.
std::vector<CheckReport> CheckQueueLemma(const RunTrace& trace);

/// Drift-plus-penalty bound of one round against each z (tolerance 1e-8).
/// The simplex variant uses the mixed anchor y~_t in place of x~_t.
/// `alpha_scale` multiplies alpha_t and exists for perturbation controls.
CheckReport CheckDppBound(const RoundSnapshot& snapshot, const Problem& problem,
                          const std::vector<Vector>& z_samples,
                          double alpha_scale = 1.0);

/// Three-point property of x* = MirrorStep(anchor, h, alpha):
/// <h, x*> + alpha D(x*, a) <= <h, z> + alpha D(z, a) - alpha D(z, x*) + 1e-8.
CheckReport CheckPushback(const Geometry& geom, const BaseSet& base,
                          const Vector& anchor, const Vector& h, double alpha,
                          const std::vector<Vector>& z_samples);

/// Pushback for `instances` random (anchor, h, alpha) triples with
/// `z_per_instance` sampled comparison points each.
CheckReport CheckPushbackRandom(const Geometry& geom, const BaseSet& base,
                                int instances, int z_per_instance, Rng& rng);

/// Pushback of both mirror steps of a recorded round.
CheckReport CheckRoundPushback(const RoundSnapshot& snapshot,
                               const Problem& problem,
                               const std::vector<Vector>& z_samples);

/// With y = (1 - nu) x + nu / d on the simplex:
///   KL(z, y) - KL(z, x) <= nu log d   (skipped when KL(z, x) is infinite)
///   KL(z, y) <= log(d / nu)
///   |y - x|_1 <= 2 nu
/// each within 1e-9.
CheckReport CheckMixing(const Vector& x_tilde, double nu,
                        const std::vector<Vector>& z_samples);

/// h(x) <= h(y) + <grad h(y), x - y> + (L/2)|x - y|^2 + 1e-9 on every pair,
/// with the norm of `geom`.
CheckReport CheckDescentLemma(
    const std::function<double(const Vector&)>& value,
    const std::function<Vector(const Vector&)>& gradient, double smoothness,
    const Geometry& geom,
    const std::vector<std::pair<Vector, Vector>>& pairs);

/// Descent lemma for every round of a loss sequence (up to `max_rounds`
/// evenly spaced rounds) with L = smoothness.
CheckReport CheckLossDescent(const LossSequence& losses, double smoothness,
                             const Geometry& geom, const BaseSet& base,
                             int pairs, int max_rounds, Rng& rng);

/// Descent lemma for each constraint g_k with L = smoothness.
CheckReport CheckConstraintDescent(const ConstraintBlock& block,
                                   double smoothness, const Geometry& geom,
                                   const BaseSet& base, int pairs, Rng& rng);

/// Running-max alpha against its closed form (1e-12 relative), plus
/// monotonicity.
CheckReport CheckAlphaSchedule(const RunTrace& trace,
                               const ScheduleConstants& constants,
                               Variant variant);

/// Simplex variant iterates: x_t, x~_t, y~_t sum to 1 within 1e-12 and are
/// nonnegative, and y~_t >= nu / d exactly. Needs snapshots.
CheckReport CheckSimplexIterates(const RunTrace& trace);

// check, rounds, samples, max_residual, pass
void WriteCheckHeader(std::ostream& out);
void WriteCheckRow(std::ostream& out, const CheckReport& report);

}  // namespace opmp
