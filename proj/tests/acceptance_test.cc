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

// Runs the eleven acceptance criteria and prints one PASS/FAIL line each.
// Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "opmp/comparator.hpp"
#include "opmp/errors.hpp"
#include "opmp/harness.hpp"
#include "opmp/theory_checks.hpp"
#include "test_oracles.hpp"

namespace opmp {
namespace {

using Clock = std::chrono::steady_clock;

const std::vector<std::string> kScenarios = {
    "golden_d2",         "fixed_quadratic_ball", "slow_drift_linear",
    "adversarial_alternating", "simplex_d10",   "box_quadratic_drift"};

ScenarioConfig Load(const std::string& name) {
  return LoadScenario(std::string(OPMP_SCENARIO_DIR) + "/" + name + ".json");
}

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void Require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

struct Context {
  std::map<std::string, ScenarioRun> runs;
  std::map<std::string, double> seconds;
  std::map<std::string, SweepResult> sweeps;
};

Outcome ViolationIdentity(Context& ctx) {
  Outcome out;
  for (const std::string& name : kScenarios) {
    const auto start = Clock::now();
    ExecuteOptions options;
    options.keep_snapshots = name == "simplex_d10";
    ScenarioRun run = ExecuteScenario(Load(name), options);
    const double secs = Seconds(start);
    ctx.seconds[name] = secs;
    const ViolationBound& b = run.metrics.bound_check;
    out.Require(run.problem.dim() <= 10 && run.problem.num_constraints() <= 4 &&
                    run.config.horizon <= 10000,
                name + " exceeds the stated size");
    out.Require(b.holds, fmt::format("{}: max violation {} > bound {}", name,
                                     b.max_violation, b.bound));
    out.Require(secs < 5.0, fmt::format("{} took {:.2f} s", name, secs));
    ctx.runs.emplace(name, std::move(run));
  }
  double slowest = 0.0;
  for (const auto& [name, s] : ctx.seconds) slowest = std::max(slowest, s);
  if (out.pass) {
    out.detail = fmt::format("{} scenarios, slowest {:.2f} s", kScenarios.size(),
                             slowest);
  }
  return out;
}

Outcome QueueInvariants(Context& ctx) {
  Outcome out;
  double worst = -INFINITY;
  for (const auto& [name, run] : ctx.runs) {
    for (const CheckReport& r : CheckQueueLemma(run.trace)) {
      worst = std::max(worst, r.max_residual);
      out.Require(r.pass, fmt::format("{} {} residual {}", name, r.name,
                                      r.max_residual));
    }
  }
  if (out.pass) out.detail = fmt::format("max residual {}", worst);
  return out;
}

Outcome AlphaSchedule(Context& ctx) {
  Outcome out;
  double worst = 0.0;
  for (const auto& [name, run] : ctx.runs) {
    const CheckReport r = CheckAlphaSchedule(
        run.trace, MakeScheduleConstants(run.problem.constants, run.hyper),
        VariantOf(run.config.algorithm));
    worst = std::max(worst, r.max_residual);
    out.Require(r.pass, fmt::format("{} relative error {}", name,
                                    r.max_residual));
  }
  if (out.pass) out.detail = fmt::format("max relative error {}", worst);
  return out;
}

Outcome FixedObjective(Context&) {
  Outcome out;
  const auto start = Clock::now();
  ScenarioConfig config = Load("fixed_quadratic_ball");
  config.horizon = 500;
  const double r500 = ExecuteScenario(config).metrics.regret;
  config.horizon = 2000;
  const double r2000 = ExecuteScenario(config).metrics.regret;
  const double secs = Seconds(start);
  out.Require(r2000 <= 1.25 * r500 + 1.0,
              fmt::format("Regret(2000)={} > 1.25*Regret(500)+1", r2000));
  out.Require(r2000 / 2000 <= 0.3 * (r500 / 500),
              fmt::format("Regret/T ratio {}", (r2000 / 2000) / (r500 / 500)));
  out.Require(secs < 2.0, fmt::format("took {:.2f} s", secs));
  if (out.pass) {
    out.detail = fmt::format("Regret(500)={:.4f} Regret(2000)={:.4f} {:.2f} s",
                             r500, r2000, secs);
  }
  return out;
}

SweepResult RunSweep(const std::string& name, std::vector<int> horizons) {
  SweepSpec spec;
  spec.base = Load(name);
  spec.horizons = std::move(horizons);
  spec.seeds = {0, 1, 2};
  return Sweep(spec);
}

Outcome Adaptivity(Context& ctx) {
  Outcome out;
  const auto start = Clock::now();
  const std::vector<int> horizons = {1000, 3000, 10000};
  const std::vector<std::pair<std::string, double>> limits = {
      {"slow_drift_linear", 0.6}, {"adversarial_alternating", 0.75}};
  std::string detail;
  for (const auto& [name, limit] : limits) {
    SweepResult result = RunSweep(name, horizons);
    const auto& slope = result.regret_slope;
    out.Require(slope.has_value(), name + ": slope undefined");
    if (slope) {
      out.Require(*slope <= limit,
                  fmt::format("{} slope {:.3f} > {}", name, *slope, limit));
      detail += fmt::format("{} slope {:.3f}; ", name, *slope);
    }
    ctx.sweeps.emplace(name, std::move(result));
  }
  const double secs = Seconds(start);
  out.Require(secs < 60.0, fmt::format("took {:.2f} s", secs));
  if (out.pass) out.detail = detail + fmt::format("{:.2f} s", secs);
  return out;
}

// Compares per-seed max violation at the largest and smallest horizon.
void RequireFlatViolation(Outcome& out, const std::string& name,
                          const SweepResult& result, std::string& detail) {
  std::map<std::uint64_t, double> small, large;
  for (const SweepCell& c : result.cells) {
    if (c.horizon == 1000) small[c.seed] = c.summary.max_violation;
    if (c.horizon == 10000) large[c.seed] = c.summary.max_violation;
  }
  out.Require(!small.empty() && small.size() == large.size(),
              name + ": missing sweep cells");
  for (const auto& [seed, v_small] : small) {
    const double v_large = large[seed];
    out.Require(v_large <= std::max(v_small, 0.0) + 10.0,
                fmt::format("{} seed {}: {} at 1e4 vs {} at 1e3", name, seed,
                            v_large, v_small));
    detail += fmt::format("{} s{} {:.3g}->{:.3g}; ", name, seed, v_small,
                          v_large);
  }
}

Outcome ConstantViolation(Context& ctx) {
  Outcome out;
  std::string detail;
  for (const auto& [name, result] : ctx.sweeps) {
    RequireFlatViolation(out, name, result, detail);
  }
  out.Require(ctx.sweeps.size() == 2, "adaptivity sweeps did not run");
  if (out.pass) out.detail = detail;
  return out;
}

Outcome SimplexVariant(Context& ctx) {
  Outcome out;
  const ScenarioRun& run = ctx.runs.at("simplex_d10");
  out.Require(run.config.algorithm == AlgorithmKind::kOmpdSimplex,
              "simplex_d10 does not use ompd-simplex");
  out.Require(run.problem.dim() == 10, "simplex_d10 is not 10-dimensional");
  out.Require(run.metrics.bound_check.holds, "violation bound fails");
  for (const CheckReport& r : CheckQueueLemma(run.trace)) {
    out.Require(r.pass, r.name + " fails");
  }
  const CheckReport alpha = CheckAlphaSchedule(
      run.trace, MakeScheduleConstants(run.problem.constants, run.hyper),
      Variant::kSimplex);
  out.Require(alpha.pass, "alpha schedule fails");

  const CheckReport iterates = CheckSimplexIterates(run.trace);
  out.Require(iterates.pass, "mixed iterate floor or simplex membership fails");

  Rng rng(17);
  CheckReport mixing = MakeReport("mixing", 1e-9);
  for (const RoundSnapshot& s : run.trace.snapshots) {
    mixing.Merge(CheckMixing(s.anchor, s.mixing,
                             SamplePoints(run.problem.base, 5, rng)));
  }
  out.Require(mixing.pass && mixing.rounds == run.trace.length(),
              fmt::format("mixing residual {}", mixing.max_residual));

  std::string detail;
  RequireFlatViolation(out, "simplex_d10",
                       RunSweep("simplex_d10", {1000, 10000}), detail);
  if (out.pass) {
    out.detail = fmt::format("{} rounds, mixing residual {}; {}",
                             mixing.rounds, mixing.max_residual, detail);
  }
  return out;
}

Outcome DppBound(Context&) {
  Outcome out;
  const auto start = Clock::now();
  ScenarioConfig config = Load("golden_d2");
  config.horizon = 200;
  ExecuteOptions options;
  options.keep_snapshots = true;
  options.compute_metrics = false;
  const ScenarioRun run = ExecuteScenario(config, options);
  Rng rng(2026);
  std::uniform_int_distribution<int> pick(0, run.trace.length() - 1);
  CheckReport dpp = MakeReport("dpp", 1e-8);
  CheckReport control = MakeReport("dpp_half_alpha", 1e-8);
  for (int i = 0; i < 100; ++i) {
    const RoundSnapshot& s = run.trace.snapshots[pick(rng)];
    const std::vector<Vector> zs = SamplePoints(run.problem.base, 20, rng);
    dpp.Merge(CheckDppBound(s, run.problem, zs));
    control.Merge(CheckDppBound(s, run.problem, zs, 0.5));
  }
  const double secs = Seconds(start);
  out.Require(dpp.pass, fmt::format("residual {}", dpp.max_residual));
  out.Require(control.max_residual > 0.0,
              fmt::format("control residual {} not positive",
                          control.max_residual));
  out.Require(secs < 5.0, fmt::format("took {:.2f} s", secs));
  if (out.pass) {
    out.detail = fmt::format(
        "{} samples, residual {:.3g}, control residual {:.3g}, {:.2f} s",
        dpp.samples, dpp.max_residual, control.max_residual, secs);
  }
  return out;
}

Outcome PushbackAndDescent(Context& ctx) {
  Outcome out;
  Rng rng(99);
  const std::vector<std::pair<Geometry, BaseSet>> geometries = {
      {Geometry::Euclidean(2), BaseSet::Ball(Vector::Zero(2), 1.0)},
      {Geometry::Euclidean(3),
       BaseSet::Box(Vector::Constant(3, -1.0), Vector::Ones(3))},
      {Geometry::Entropic(10), BaseSet::Simplex(10)},
  };
  for (const auto& [geom, base] : geometries) {
    const CheckReport r = CheckPushbackRandom(geom, base, 50, 20, rng);
    out.Require(r.pass, fmt::format("pushback on {} residual {}",
                                    ToString(base.kind()), r.max_residual));
  }

  std::map<std::string, bool> families;
  for (const auto& [name, run] : ctx.runs) {
    const Problem& p = run.problem;
    const CheckReport loss = CheckLossDescent(
        *p.losses, p.constants.loss_smoothness, p.geometry, p.base, 1000, 20,
        rng);
    out.Require(loss.pass, fmt::format("{} loss descent residual {}", name,
                                       loss.max_residual));
    families[std::string(ToString(p.losses->family()))] = true;
    if (p.num_constraints() > 0) {
      const CheckReport g = CheckConstraintDescent(
          p.constraints, p.constants.constraint_smoothness, p.geometry, p.base,
          1000, rng);
      out.Require(g.pass, fmt::format("{} constraint descent residual {}",
                                      name, g.max_residual));
    }
  }

  // Understated smoothness must be caught.
  const ScenarioRun& quad = ctx.runs.at("fixed_quadratic_ball");
  const CheckReport bad_loss = CheckLossDescent(
      *quad.problem.losses, 0.5 * quad.problem.constants.loss_smoothness,
      quad.problem.geometry, quad.problem.base, 1000, 1, rng);
  out.Require(!bad_loss.pass, "understated loss smoothness not detected");
  const ScenarioRun& box = ctx.runs.at("box_quadratic_drift");
  const CheckReport bad_g = CheckConstraintDescent(
      box.problem.constraints, 0.5 * box.problem.constants.constraint_smoothness,
      box.problem.geometry, box.problem.base, 1000, rng);
  out.Require(!bad_g.pass, "understated constraint smoothness not detected");

  if (out.pass) {
    std::string names;
    for (const auto& [f, _] : families) names += f + " ";
    out.detail = fmt::format("3 geometries x 50 instances; loss families: {}",
                             names);
  }
  return out;
}

Outcome ComparatorOracle(Context&) {
  Outcome out;
  Rng rng(7);
  std::uniform_real_distribution<double> unif(-1.5, 1.5);
  std::uniform_real_distribution<double> angle(0.0, 2 * M_PI);
  const BaseSet ball = BaseSet::Ball(Vector::Zero(2), 1.0);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const Vector target{{unif(rng), unif(rng)}};
    const double theta = angle(rng);
    const Vector a{{std::cos(theta), std::sin(theta)}};
    const double b = unif(rng) / 3.0;
    const auto losses = MakeFixedQuadratic(target, 1.0, 10);
    const ConstraintBlock block(2, {LinearConstraint{a, b}});
    const Vector x = HindsightComparator(*losses, block, ball);
    const auto grid = testing::GridSearchBallHalfplane2(
        [&](double p, double q) { return losses->Value(1, Vector{{p, q}}); },
        a, b, Vector::Zero(2), 1.0, 1e-3);
    const double gap = std::abs(losses->Value(1, x) - grid.value);
    worst = std::max(worst, gap);
    out.Require(gap <= 1e-3, fmt::format("instance {} gap {}", i, gap));
  }
  if (out.pass) out.detail = fmt::format("max objective gap {:.3g}", worst);
  return out;
}

Outcome Determinism(Context& ctx) {
  Outcome out;
  for (const std::string& name : kScenarios) {
    const ScenarioConfig config = Load(name);
    ExecuteOptions options;
    options.compute_metrics = false;
    const std::string again = RoundCsv(ExecuteScenario(config, options).trace);
    out.Require(RoundCsv(ctx.runs.at(name).trace) == again,
                name + " CSV differs between runs");
  }
  if (out.pass) out.detail = fmt::format("{} scenarios", kScenarios.size());
  return out;
}

int Main() {
  const std::vector<std::pair<std::string, std::function<Outcome(Context&)>>>
      criteria = {
          {"violation bound from the final queue", ViolationIdentity},
          {"queue invariants", QueueInvariants},
          {"alpha schedule closed form", AlphaSchedule},
          {"fixed-objective regret stays bounded", FixedObjective},
          {"gradient-variation adaptivity", Adaptivity},
          {"constant violation growth", ConstantViolation},
          {"simplex variant", SimplexVariant},
          {"drift-plus-penalty bound", DppBound},
          {"pushback and descent suites", PushbackAndDescent},
          {"comparator matches grid search", ComparatorOracle},
          {"deterministic per-round CSV", Determinism},
      };
  Context ctx;
  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    try {
      outcome = criteria[i].second(ctx);
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = fmt::format("threw: {}", e.what());
    }
    if (!outcome.pass) ++failures;
    fmt::print("{} {:2} {}: {}\n", outcome.pass ? "PASS" : "FAIL", i + 1,
               criteria[i].first, outcome.detail);
    std::fflush(stdout);
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - failures,
             criteria.size());
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace opmp

int main() { return opmp::Main(); }
