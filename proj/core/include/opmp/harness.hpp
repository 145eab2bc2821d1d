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
#include <string>
#include <vector>

#include "opmp/metrics.hpp"
#include "opmp/problem.hpp"
#include "opmp/scenario.hpp"
#include "opmp/theory_checks.hpp"
#include "opmp/trace.hpp"

namespace opmp {

struct ExecuteOptions {
  bool keep_snapshots = false;
  bool compute_metrics = true;
  int variation_samples = 32;
};

/// Everything produced by one scenario run.
///
/// For pd-baseline runs the queue is the baseline's multiplier vector, so
/// queue_bound and the violation bound check are reported as NaN / false.
struct ScenarioRun {
  ScenarioConfig config;
  Problem problem;
  HyperParams hyper;
  double v_cap = 0.0;
  RunTrace trace;
  Vector comparator;
  MetricsReport metrics;
  SummaryRow summary;
};

ScenarioRun ExecuteScenario(const ScenarioConfig& config,
                            const ExecuteOptions& options = {});

// <scenario_id>_T<T>_s<seed>.csv
std::string RoundCsvName(const ScenarioConfig& config);

/// Runs the scenario, writes the per-round CSV into `out_dir` and appends a
/// row to `out_dir`/summary.csv (creating it with a header).
ScenarioRun RunScenario(const ScenarioConfig& config,
                        const std::string& out_dir);

/// Least-squares slope of log(value) against log(x). Absent with fewer than
/// two distinct x or any nonpositive value.
std::optional<double> LogLogSlope(const std::vector<double>& x,
                                  const std::vector<double>& values);

struct SweepSpec {
  ScenarioConfig base;
  std::vector<int> horizons;
  std::vector<std::uint64_t> seeds;
  std::string out_dir;  // empty: no files written
  int threads = 0;      // 0: OPMP_THREADS or the hardware concurrency
};

struct SweepCell {
  int horizon = 0;
  std::uint64_t seed = 0;
  SummaryRow summary;
  double max_clipped_violation = 0.0;
};

// Seed averages at one horizon.
struct SweepPoint {
  int horizon = 0;
  double mean_regret = 0.0;
  double mean_max_violation = 0.0;
  double mean_max_clipped_violation = 0.0;
};

struct SweepResult {
  std::vector<SweepCell> cells;  // ordered by (T, seed)
  std::vector<SweepPoint> points;
  std::optional<double> regret_slope;
  std::optional<double> violation_slope;  // fitted on mean violation + offset
  double violation_offset = 0.0;          // 1 + |min mean violation|
};

/// Independent runs for every (T, seed) cell, in parallel. With an output
/// directory it writes one round CSV per cell, summary.csv, and sweep.csv
/// with the seed-averaged curve and both slopes.
SweepResult Sweep(const SweepSpec& spec);

// Worker count: OPMP_THREADS when set, else the hardware concurrency.
int DefaultThreadCount();

/// Parses "all" (returned as {"all"}) or a comma list out of queue,
/// violation, alpha, dpp, pushback, mixing, simplex, descent. Throws
/// ValidationError on unknown names.
std::vector<std::string> ParseLemmaList(const std::string& text);

/// Runs the scenario with snapshots and evaluates the requested checks.
/// "all" skips checks that do not apply (mixing and simplex outside the
/// simplex variant); naming an inapplicable check is a ValidationError.
std::vector<CheckReport> RunChecks(const ScenarioConfig& config,
                                   const std::vector<std::string>& lemmas);

}  // namespace opmp
