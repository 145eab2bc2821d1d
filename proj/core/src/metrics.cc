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

#include "opmp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <sstream>

#include <fmt/format.h>

#include "opmp/errors.hpp"
#include "opmp/sampling.hpp"

namespace opmp {

namespace {

void CheckIndex(const RunTrace& trace, int k) {
  if (k < 1 || k > trace.num_constraints) {
    throw ArgumentError(fmt::format("constraint index {} outside 1..{}", k,
                                    trace.num_constraints));
  }
}

}  // namespace

double Regret(const RunTrace& trace, const Vector& comparator,
              const LossSequence& losses, const ConstraintBlock& constraints) {
  if (constraints.size() > 0) {
    const Vector g = constraints.Values(comparator);
    Eigen::Index worst = 0;
    const double max_g = g.maxCoeff(&worst);
    if (max_g > kComparatorFeasibilityTolerance) {
      throw ArgumentError(fmt::format(
          "comparator violates constraint {} by {}", worst + 1, max_g));
    }
  }
  double regret = 0.0;
  for (const RoundRecord& r : trace.rounds) {
    regret += losses.Value(r.t, r.decision) - losses.Value(r.t, comparator);
  }
  return regret;
}

double Violation(const RunTrace& trace, int k) {
  CheckIndex(trace, k);
  double sum = 0.0;
  for (const RoundRecord& r : trace.rounds) sum += r.g_values[k - 1];
  return sum;
}

double ClippedViolation(const RunTrace& trace, int k) {
  CheckIndex(trace, k);
  double sum = 0.0;
  for (const RoundRecord& r : trace.rounds) {
    sum += std::max(r.g_values[k - 1], 0.0);
  }
  return sum;
}

Vector Violations(const RunTrace& trace) {
  Vector v(trace.num_constraints);
  for (int k = 1; k <= trace.num_constraints; ++k) v[k - 1] = Violation(trace, k);
  return v;
}

double MaxViolation(const RunTrace& trace) {
  if (trace.num_constraints == 0) return 0.0;
  return Violations(trace).maxCoeff();
}

double MaxClippedViolation(const RunTrace& trace) {
  double best = 0.0;
  for (int k = 1; k <= trace.num_constraints; ++k) {
    best = std::max(best, ClippedViolation(trace, k));
  }
  return best;
}

ViolationBound ViolationBoundCheck(const RunTrace& trace, double gamma) {
  if (!(gamma > 0.0)) throw ArgumentError("gamma must be positive");
  if (trace.final_queue.size() != trace.num_constraints) {
    throw DataError("trace has no final queue Q(T+1)");
  }
  ViolationBound out;
  out.bound = trace.final_queue.norm() / gamma;
  out.max_violation = MaxViolation(trace);
  out.slack = out.bound - out.max_violation;
  out.holds = out.max_violation <= out.bound + 1e-9;
  return out;
}

double EmpiricalVariation(const RunTrace& trace, const LossSequence& losses,
                          const Geometry& geom, const BaseSet& base,
                          int sample_budget, std::uint64_t seed) {
  if (sample_budget < 1) throw ArgumentError("sample budget must be >= 1");
  Rng rng(seed);
  const std::vector<Vector> points = SamplePoints(base, sample_budget, rng);
  double total = 0.0;
  for (int i = 1; i < trace.length(); ++i) {
    const int t = trace.rounds[i].t;
    double best = 0.0;
    auto visit = [&](const Vector& x) {
      const Vector diff = losses.Gradient(t, x) - losses.Gradient(t - 1, x);
      best = std::max(best, std::pow(geom.DualNorm(diff), 2));
    };
    for (const Vector& x : points) visit(x);
    visit(trace.rounds[i - 1].decision);
    visit(trace.rounds[i].decision);
    total += best;
  }
  return total;
}

std::string FormatDouble(double value) { return fmt::format("{}", value); }

void WriteRoundCsv(std::ostream& out, const RunTrace& trace) {
  const int K = trace.num_constraints;
  std::string line = "t,loss,cum_loss";
  for (int k = 1; k <= K; ++k) line += fmt::format(",g_{}", k);
  for (int k = 1; k <= K; ++k) line += fmt::format(",cum_g_{}", k);
  line += ",q_l1,q_l2,alpha,xi\n";
  out << line;

  double cum_loss = 0.0;
  std::vector<double> cum_g(K, 0.0);
  for (const RoundRecord& r : trace.rounds) {
    cum_loss += r.loss;
    line = fmt::format("{},{},{}", r.t, FormatDouble(r.loss),
                       FormatDouble(cum_loss));
    for (int k = 0; k < K; ++k) {
      line += ',' + FormatDouble(r.g_values[k]);
      cum_g[k] += r.g_values[k];
    }
    for (int k = 0; k < K; ++k) line += ',' + FormatDouble(cum_g[k]);
    line += fmt::format(",{},{},{},{}\n", FormatDouble(r.queue_l1),
                        FormatDouble(r.queue_l2), FormatDouble(r.alpha),
                        FormatDouble(r.xi));
    out << line;
  }
}

std::string RoundCsv(const RunTrace& trace) {
  std::ostringstream out;
  WriteRoundCsv(out, trace);
  return out.str();
}

void WriteSummaryHeader(std::ostream& out) {
  out << "scenario_id,T,regret,max_violation,queue_bound,V_cap,V_empirical\n";
}

void WriteSummaryRow(std::ostream& out, const SummaryRow& row) {
  out << fmt::format("{},{},{},{},{},{},{}\n", row.scenario_id, row.horizon,
                     FormatDouble(row.regret), FormatDouble(row.max_violation),
                     FormatDouble(row.queue_bound), FormatDouble(row.v_cap),
                     FormatDouble(row.v_empirical));
}

}  // namespace opmp
