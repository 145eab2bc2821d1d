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

#include "opmp/theory_checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include <fmt/format.h>

#include "opmp/errors.hpp"
#include "opmp/metrics.hpp"

namespace opmp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double PushbackResidual(const Geometry& geom, const BaseSet& base,
                        const Vector& anchor, const Vector& h, double alpha,
                        const Vector& x_opt, const Vector& z) {
  const double lhs = h.dot(x_opt) + alpha * Bregman(geom, base, x_opt, anchor);
  const double rhs = h.dot(z) + alpha * Bregman(geom, base, z, anchor) -
                     alpha * Bregman(geom, base, z, x_opt);
  return lhs - rhs;
}

void RequireSnapshot(const RoundSnapshot& s, int dim, int num_constraints) {
  const bool ok = s.x.size() == dim && s.x_prev.size() == dim &&
                  s.anchor.size() == dim && s.anchor_next.size() == dim &&
                  s.grad.size() == dim && s.grad_prev.size() == dim &&
                  s.queue.size() == num_constraints &&
                  s.queue_next.size() == num_constraints &&
                  s.g.size() == num_constraints &&
                  s.g_prev.size() == num_constraints && s.alpha > 0.0;
  if (!ok) {
    throw DataError(fmt::format("round {} snapshot is incomplete", s.t));
  }
  if (s.mixing > 0.0 && s.mixed.size() != dim) {
    throw DataError(
        fmt::format("round {} snapshot lacks the mixed iterate", s.t));
  }
}

const Vector& StepAnchor(const RoundSnapshot& s) {
  return s.mixing > 0.0 ? s.mixed : s.anchor;
}

}  // namespace

void CheckReport::Record(double residual) {
  max_residual = std::max(max_residual, residual + 0.0);
  if (std::isnan(residual)) max_residual = kInf;
  pass = max_residual <= tolerance;
}

void CheckReport::Merge(const CheckReport& other) {
  rounds += other.rounds;
  samples += other.samples;
  skipped += other.skipped;
  Record(other.max_residual);
}

CheckReport MakeReport(std::string name, double tolerance) {
  CheckReport report;
  report.name = std::move(name);
  report.tolerance = tolerance;
  report.max_residual = -kInf;
  report.pass = true;
  return report;
}

std::vector<CheckReport> CheckQueueLemma(const RunTrace& trace) {
  const int K = trace.num_constraints;
  const double gamma = trace.gamma;
  if (trace.length() > 0 && trace.final_queue.size() != K) {
    throw DataError("trace has no final queue Q(T+1)");
  }
  CheckReport nonneg = MakeReport("queue_nonneg", 0.0);
  CheckReport pushed = MakeReport("queue_pushed_nonneg", 0.0);
  CheckReport drift = MakeReport("queue_drift", 1e-9);
  CheckReport l2 = MakeReport("queue_l2_growth", 1e-9);
  CheckReport l1 = MakeReport("queue_l1_change", 1e-9);

  const Vector zero = Vector::Zero(K);
  for (int u = 1; u <= trace.length() + 1; ++u) {
    if (trace.length() == 0) break;
    const Vector& prev = u == 1 ? zero : trace.rounds[u - 2].queue;
    const bool last = u == trace.length() + 1;
    const Vector& next = last ? trace.final_queue : trace.rounds[u - 1].queue;
    const Vector& g =
        last ? trace.rounds[u - 2].g_values : trace.rounds[u - 1].g_fed;
    if (prev.size() != K || next.size() != K || g.size() != K) {
      throw DataError(fmt::format("update {} is missing queue inputs", u));
    }
    for (CheckReport* r : {&nonneg, &pushed, &drift, &l2, &l1}) {
      ++r->rounds;
      r->samples += K;
    }
    if (K == 0) continue;

    nonneg.Record((-next).maxCoeff());
    const Vector push = gamma * g;
    pushed.Record((-(next + push)).maxCoeff());
    drift.Record(0.5 * (next.squaredNorm() - prev.squaredNorm()) -
                 (gamma * prev.dot(g) + gamma * gamma * g.squaredNorm()));
    l2.Record(next.norm() - (prev.norm() + gamma * g.norm()));
    l1.Record(std::abs(next.lpNorm<1>() - prev.lpNorm<1>()) -
              gamma * g.lpNorm<1>());
  }
  return {nonneg, pushed, drift, l2, l1};
}

CheckReport CheckDppBound(const RoundSnapshot& s, const Problem& problem,
                          const std::vector<Vector>& z_samples,
                          double alpha_scale) {
  RequireSnapshot(s, problem.dim(), problem.num_constraints());
  const Geometry& geom = problem.geometry;
  const BaseSet& base = problem.base;
  const Vector& anchor = StepAnchor(s);
  const double alpha = s.alpha * alpha_scale;
  const double gamma = s.gamma;

  const double lhs = 0.5 * (s.queue_next.squaredNorm() - s.queue.squaredNorm()) +
                     s.grad_prev.dot(s.x) +
                     alpha * Bregman(geom, base, s.x, anchor);

  const Vector weights = s.queue + gamma * s.g_prev;
  const double fixed =
      0.5 * s.xi * std::pow(geom.PrimalNorm(s.x - s.x_prev), 2) +
      0.5 * gamma * gamma * (s.g.squaredNorm() - s.g_prev.squaredNorm()) +
      (s.grad_prev - s.grad).dot(s.anchor_next) -
      alpha * Bregman(geom, base, s.anchor_next, s.x);

  CheckReport report = MakeReport("dpp", 1e-8);
  report.rounds = 1;
  for (const Vector& z : z_samples) {
    const double rhs = fixed + s.grad.dot(z) +
                       alpha * Bregman(geom, base, z, anchor) -
                       alpha * Bregman(geom, base, z, s.anchor_next) +
                       gamma * weights.dot(problem.constraints.Values(z));
    report.Record(lhs - rhs);
    ++report.samples;
  }
  return report;
}

CheckReport CheckPushback(const Geometry& geom, const BaseSet& base,
                          const Vector& anchor, const Vector& h, double alpha,
                          const std::vector<Vector>& z_samples) {
  const Vector x_opt = MirrorStep(geom, base, anchor, h, alpha);
  CheckReport report = MakeReport("pushback", 1e-8);
  report.rounds = 1;
  for (const Vector& z : z_samples) {
    report.Record(PushbackResidual(geom, base, anchor, h, alpha, x_opt, z));
    ++report.samples;
  }
  return report;
}

CheckReport CheckPushbackRandom(const Geometry& geom, const BaseSet& base,
                                int instances, int z_per_instance, Rng& rng) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> log_scale(std::log(0.1),
                                                   std::log(10.0));
  std::uniform_real_distribution<double> log_alpha(std::log(0.5),
                                                   std::log(50.0));
  CheckReport report = MakeReport("pushback", 1e-8);
  for (int i = 0; i < instances; ++i) {
    const Vector anchor = SampleUniform(base, rng);
    const double scale = std::exp(log_scale(rng));
    Vector h(base.dim());
    for (Eigen::Index j = 0; j < h.size(); ++j) h[j] = scale * normal(rng);
    const double alpha = std::exp(log_alpha(rng));
    report.Merge(CheckPushback(geom, base, anchor, h, alpha,
                               SamplePoints(base, z_per_instance, rng)));
  }
  return report;
}

CheckReport CheckRoundPushback(const RoundSnapshot& s, const Problem& problem,
                               const std::vector<Vector>& z_samples) {
  RequireSnapshot(s, problem.dim(), problem.num_constraints());
  const Geometry& geom = problem.geometry;
  const BaseSet& base = problem.base;
  const Vector& anchor = StepAnchor(s);
  const ConstraintEval eval = problem.constraints.Eval(s.x_prev);
  const Vector direction =
      eval.jacobian.transpose() * (s.gamma * (s.queue + s.gamma * s.g_prev));
  const Vector h_primal = s.grad_prev + direction;
  const Vector h_intermediate = s.grad + direction;

  CheckReport report = MakeReport("pushback", 1e-8);
  report.rounds = 1;
  for (const Vector& z : z_samples) {
    report.Record(
        PushbackResidual(geom, base, anchor, h_primal, s.alpha, s.x, z));
    report.Record(PushbackResidual(geom, base, anchor, h_intermediate,
                                   s.alpha, s.anchor_next, z));
    report.samples += 2;
  }
  return report;
}

CheckReport CheckMixing(const Vector& x_tilde, double nu,
                        const std::vector<Vector>& z_samples) {
  if (!(nu > 0.0) || nu > 1.0) throw ArgumentError("nu must lie in (0, 1]");
  const int d = static_cast<int>(x_tilde.size());
  const Geometry geom = Geometry::Entropic(d);
  const BaseSet base = BaseSet::Simplex(d);
  const Vector y = MixIterate(x_tilde, nu);
  const double log_d = std::log(static_cast<double>(d));

  CheckReport report = MakeReport("mixing", 1e-9);
  report.rounds = 1;
  report.Record((y - x_tilde).lpNorm<1>() - 2.0 * nu);
  for (const Vector& z : z_samples) {
    const double kl_y = Bregman(geom, base, z, y);
    report.Record(kl_y - std::log(d / nu));
    try {
      const double kl_x = Bregman(geom, base, z, x_tilde);
      report.Record(kl_y - kl_x - nu * log_d);
    } catch (const DomainError&) {
      ++report.skipped;
    }
    ++report.samples;
  }
  return report;
}

CheckReport CheckDescentLemma(
    const std::function<double(const Vector&)>& value,
    const std::function<Vector(const Vector&)>& gradient, double smoothness,
    const Geometry& geom,
    const std::vector<std::pair<Vector, Vector>>& pairs) {
  CheckReport report = MakeReport("descent", 1e-9);
  report.rounds = 1;
  for (const auto& [x, y] : pairs) {
    const double rhs = value(y) + gradient(y).dot(x - y) +
                       0.5 * smoothness * std::pow(geom.PrimalNorm(x - y), 2);
    report.Record(value(x) - rhs);
    ++report.samples;
  }
  return report;
}

CheckReport CheckLossDescent(const LossSequence& losses, double smoothness,
                             const Geometry& geom, const BaseSet& base,
                             int pairs, int max_rounds, Rng& rng) {
  const auto sample = SamplePairs(base, pairs, rng);
  const int T = losses.horizon();
  const int count = std::min(T, std::max(1, max_rounds));
  CheckReport report = MakeReport("descent_loss", 1e-9);
  for (int i = 0; i < count; ++i) {
    const int t = count == 1 ? 1 : 1 + static_cast<int>(
                                           static_cast<long long>(i) *
                                           (T - 1) / (count - 1));
    report.Merge(CheckDescentLemma(
        [&](const Vector& x) { return losses.Value(t, x); },
        [&](const Vector& x) { return losses.Gradient(t, x); }, smoothness,
        geom, sample));
  }
  return report;
}

CheckReport CheckConstraintDescent(const ConstraintBlock& block,
                                   double smoothness, const Geometry& geom,
                                   const BaseSet& base, int pairs, Rng& rng) {
  const auto sample = SamplePairs(base, pairs, rng);
  CheckReport report = MakeReport("descent_constraint", 1e-9);
  for (int k = 0; k < block.size(); ++k) {
    report.Merge(CheckDescentLemma(
        [&](const Vector& x) { return block.Values(x)[k]; },
        [&](const Vector& x) -> Vector {
          return block.Eval(x).jacobian.row(k).transpose();
        },
        smoothness, geom, sample));
  }
  return report;
}

CheckReport CheckAlphaSchedule(const RunTrace& trace,
                               const ScheduleConstants& constants,
                               Variant variant) {
  CheckReport report = MakeReport("alpha_schedule", 1e-12);
  double max_queue = 0.0;
  double prev = 0.0;
  for (const RoundRecord& r : trace.rounds) {
    max_queue = std::max(max_queue, r.queue_l1);
    const double closed = AlphaClosedForm(max_queue, constants, variant);
    report.Record(std::abs(r.alpha - closed) / std::abs(closed));
    if (r.alpha < prev) report.Record(kInf);
    prev = r.alpha;
    ++report.rounds;
    ++report.samples;
  }
  return report;
}

CheckReport CheckSimplexIterates(const RunTrace& trace) {
  CheckReport report = MakeReport("simplex_iterates", 1e-12);
  if (trace.length() > 0 &&
      static_cast<int>(trace.snapshots.size()) != trace.length()) {
    throw DataError("simplex iterate check needs per-round snapshots");
  }
  for (const RoundSnapshot& s : trace.snapshots) {
    if (s.mixed.size() == 0) {
      throw DataError(fmt::format("round {} has no mixed iterate", s.t));
    }
    const double floor = s.mixing / static_cast<double>(s.mixed.size());
    for (const Vector* v : {&s.x, &s.anchor, &s.anchor_next, &s.mixed}) {
      report.Record(std::abs(v->sum() - 1.0));
      if (v->minCoeff() < 0.0) report.Record(kInf);
    }
    if (s.mixed.minCoeff() < floor) report.Record(kInf);
    ++report.rounds;
    report.samples += 4;
  }
  return report;
}

void WriteCheckHeader(std::ostream& out) {
  out << "check,rounds,samples,max_residual,pass\n";
}

void WriteCheckRow(std::ostream& out, const CheckReport& report) {
  out << fmt::format("{},{},{},{},{}\n", report.name, report.rounds,
                     report.samples, FormatDouble(report.max_residual),
                     report.pass ? "true" : "false");
}

}  // namespace opmp
