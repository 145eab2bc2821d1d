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

#include "opmp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "opmp/algorithm.hpp"
#include "opmp/baseline.hpp"
#include "opmp/comparator.hpp"
#include "opmp/errors.hpp"

namespace opmp {

namespace fs = std::filesystem;

namespace {

constexpr int kCheckRounds = 100;
constexpr int kZPerRound = 20;
constexpr int kDescentPairs = 1000;
constexpr int kDescentRounds = 20;
constexpr int kRandomPushbackInstances = 50;

const std::vector<std::string>& AllLemmas() {
  static const std::vector<std::string> names = {
      "queue",  "violation", "alpha",   "dpp",
      "pushback", "mixing",  "simplex", "descent"};
  return names;
}

void WriteFile(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
  out << text;
  if (!out) throw std::runtime_error(fmt::format("write failed for '{}'", path.string()));
}

void EnsureDir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw std::runtime_error(
        fmt::format("cannot create '{}': {}", dir.string(), ec.message()));
  }
}

// Indices of up to `count` distinct rounds, sorted.
std::vector<int> PickRounds(int total, int count, Rng& rng) {
  std::vector<int> idx(total);
  std::iota(idx.begin(), idx.end(), 0);
  if (total <= count) return idx;
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(count);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace

ScenarioRun ExecuteScenario(const ScenarioConfig& config,
                            const ExecuteOptions& options) {
  Problem problem = BuildProblem(config);
  const double v_cap = ResolveVariationCap(config, problem);
  const bool baseline = config.algorithm == AlgorithmKind::kPdBaseline;
  HyperParams hp;
  if (!baseline) {
    hp = HyperParamsFromVariation(v_cap, problem.constants.loss_smoothness,
                                  config.horizon, VariantOf(config.algorithm));
  }

  RunOptions run_options;
  run_options.keep_snapshots = options.keep_snapshots;
  RunTrace trace =
      baseline ? RunBaseline(problem, config.baseline, config.horizon,
                             run_options)
               : Run(VariantOf(config.algorithm), problem, hp, config.horizon,
                     run_options);
  trace.fingerprint = Fingerprint{ConfigHash(config), config.seed};

  ScenarioRun run{config, std::move(problem), hp, v_cap, std::move(trace),
                  Vector(), MetricsReport{}, SummaryRow{}};
  if (!options.compute_metrics) return run;

  const Problem& p = run.problem;
  run.comparator = HindsightComparator(*p.losses, p.constraints, p.base);
  MetricsReport& m = run.metrics;
  m.regret = Regret(run.trace, run.comparator, *p.losses, p.constraints);
  m.violation = Violations(run.trace);
  m.clipped_violation.resize(run.trace.num_constraints);
  for (int k = 1; k <= run.trace.num_constraints; ++k) {
    m.clipped_violation[k - 1] = ClippedViolation(run.trace, k);
  }
  m.v_empirical = EmpiricalVariation(run.trace, *p.losses, p.geometry, p.base,
                                     options.variation_samples, config.seed);
  if (baseline) {
    m.queue_bound = std::numeric_limits<double>::quiet_NaN();
    m.bound_check.max_violation = MaxViolation(run.trace);
  } else {
    m.bound_check = ViolationBoundCheck(run.trace, hp.gamma);
    m.queue_bound = m.bound_check.bound;
  }

  run.summary = SummaryRow{config.scenario_id, config.horizon,  m.regret,
                           MaxViolation(run.trace), m.queue_bound, v_cap,
                           m.v_empirical};
  return run;
}

std::string RoundCsvName(const ScenarioConfig& config) {
  return fmt::format("{}_T{}_s{}.csv", config.scenario_id, config.horizon,
                     config.seed);
}

ScenarioRun RunScenario(const ScenarioConfig& config,
                        const std::string& out_dir) {
  ScenarioRun run = ExecuteScenario(config);
  const fs::path dir(out_dir);
  EnsureDir(dir);
  WriteFile(dir / RoundCsvName(config), RoundCsv(run.trace));

  const fs::path summary = dir / "summary.csv";
  const bool fresh = !fs::exists(summary);
  std::ofstream out(summary, std::ios::app | std::ios::binary);
  if (!out) {
    throw std::runtime_error(
        fmt::format("cannot append to '{}'", summary.string()));
  }
  if (fresh) WriteSummaryHeader(out);
  WriteSummaryRow(out, run.summary);
  return run;
}

std::optional<double> LogLogSlope(const std::vector<double>& x,
                                  const std::vector<double>& values) {
  if (x.size() != values.size()) {
    throw ArgumentError("slope fit needs as many values as abscissae");
  }
  const std::set<double> distinct(x.begin(), x.end());
  if (distinct.size() < 2) return std::nullopt;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(values[i] > 0.0)) return std::nullopt;
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(values[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(values[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

int DefaultThreadCount() {
  if (const char* env = std::getenv("OPMP_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

SweepResult Sweep(const SweepSpec& spec) {
  if (spec.horizons.empty() || spec.seeds.empty()) {
    throw ValidationError("sweep needs at least one T value and one seed");
  }
  std::vector<ScenarioConfig> configs;
  for (int T : spec.horizons) {
    for (std::uint64_t seed : spec.seeds) {
      ScenarioConfig c = spec.base;
      c.horizon = T;
      c.seed = seed;
      ValidateScenario(c);
      configs.push_back(std::move(c));
    }
  }
  std::sort(configs.begin(), configs.end(), [](const auto& a, const auto& b) {
    return std::pair(a.horizon, a.seed) < std::pair(b.horizon, b.seed);
  });
  configs.erase(std::unique(configs.begin(), configs.end(),
                            [](const auto& a, const auto& b) {
                              return a.horizon == b.horizon && a.seed == b.seed;
                            }),
                configs.end());

  const fs::path dir(spec.out_dir);
  if (!spec.out_dir.empty()) EnsureDir(dir);

  SweepResult result;
  result.cells.resize(configs.size());
  std::vector<std::exception_ptr> errors(configs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      try {
        const ScenarioRun run = ExecuteScenario(configs[i]);
        if (!spec.out_dir.empty()) {
          WriteFile(dir / RoundCsvName(configs[i]), RoundCsv(run.trace));
        }
        result.cells[i] = SweepCell{configs[i].horizon, configs[i].seed,
                                    run.summary,
                                    MaxClippedViolation(run.trace)};
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int threads = std::min<int>(
      spec.threads > 0 ? spec.threads : DefaultThreadCount(),
      static_cast<int>(configs.size()));
  std::vector<std::thread> pool;
  for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::map<int, std::vector<const SweepCell*>> by_horizon;
  for (const SweepCell& cell : result.cells) {
    by_horizon[cell.horizon].push_back(&cell);
  }
  std::vector<double> xs, regrets, violations;
  for (const auto& [T, cells] : by_horizon) {
    SweepPoint p;
    p.horizon = T;
    for (const SweepCell* c : cells) {
      p.mean_regret += c->summary.regret;
      p.mean_max_violation += c->summary.max_violation;
      p.mean_max_clipped_violation += c->max_clipped_violation;
    }
    const double n = static_cast<double>(cells.size());
    p.mean_regret /= n;
    p.mean_max_violation /= n;
    p.mean_max_clipped_violation /= n;
    result.points.push_back(p);
    xs.push_back(T);
    regrets.push_back(p.mean_regret);
    violations.push_back(p.mean_max_violation);
  }
  const double min_violation =
      *std::min_element(violations.begin(), violations.end());
  result.violation_offset = 1.0 + std::abs(min_violation);
  std::vector<double> shifted = violations;
  for (double& v : shifted) v += result.violation_offset;
  result.regret_slope = LogLogSlope(xs, regrets);
  result.violation_slope = LogLogSlope(xs, shifted);

  if (!spec.out_dir.empty()) {
    std::string summary;
    {
      std::ostringstream out;
      WriteSummaryHeader(out);
      for (const SweepCell& cell : result.cells) WriteSummaryRow(out, cell.summary);
      summary = out.str();
    }
    WriteFile(dir / "summary.csv", summary);

    auto opt = [](const std::optional<double>& v) {
      return v ? FormatDouble(*v) : std::string();
    };
    std::string table =
        "T,mean_regret,mean_max_violation,mean_max_clipped_violation,"
        "regret_slope,violation_slope,violation_offset\n";
    for (const SweepPoint& p : result.points) {
      table += fmt::format("{},{},{},{},{},{},{}\n", p.horizon,
                           FormatDouble(p.mean_regret),
                           FormatDouble(p.mean_max_violation),
                           FormatDouble(p.mean_max_clipped_violation),
                           opt(result.regret_slope),
                           opt(result.violation_slope),
                           FormatDouble(result.violation_offset));
    }
    WriteFile(dir / "sweep.csv", table);
  }
  return result;
}

std::vector<std::string> ParseLemmaList(const std::string& text) {
  if (text == "all") return {"all"};
  std::vector<std::string> out;
  std::vector<std::string> bad;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(',', start), text.size());
    const std::string name = text.substr(start, end - start);
    const auto& known = AllLemmas();
    if (std::find(known.begin(), known.end(), name) == known.end()) {
      bad.push_back(name);
    } else if (std::find(out.begin(), out.end(), name) == out.end()) {
      out.push_back(name);
    }
    start = end + 1;
  }
  if (!bad.empty() || out.empty()) {
    std::string message = "unknown lemma name(s):";
    for (const std::string& b : bad) message += fmt::format(" '{}'", b);
    throw ValidationError(message);
  }
  return out;
}

std::vector<CheckReport> RunChecks(const ScenarioConfig& config,
                                   const std::vector<std::string>& lemmas) {
  if (config.algorithm == AlgorithmKind::kPdBaseline) {
    throw ValidationError(
        "invalid scenario:\n  algorithm: checks apply to ompd and ompd-simplex");
  }
  const bool simplex = config.algorithm == AlgorithmKind::kOmpdSimplex;
  std::vector<std::string> names;
  if (lemmas.size() == 1 && lemmas.front() == "all") {
    for (const std::string& n : AllLemmas()) {
      if (!simplex && (n == "mixing" || n == "simplex")) continue;
      names.push_back(n);
    }
  } else {
    for (const std::string& n : lemmas) {
      if (!simplex && (n == "mixing" || n == "simplex")) {
        throw ValidationError(fmt::format(
            "check '{}' applies only to the ompd-simplex algorithm", n));
      }
      names.push_back(n);
    }
  }

  ExecuteOptions options;
  options.keep_snapshots = true;
  options.compute_metrics = false;
  const ScenarioRun run = ExecuteScenario(config, options);
  const Problem& p = run.problem;
  const RunTrace& trace = run.trace;
  const Variant variant = VariantOf(config.algorithm);
  Rng rng(config.seed ^ 0x9e3779b97f4a7c15ULL);

  std::vector<CheckReport> reports;
  for (const std::string& name : names) {
    if (name == "queue") {
      for (CheckReport& r : CheckQueueLemma(trace)) reports.push_back(r);
    } else if (name == "violation") {
      const ViolationBound b = ViolationBoundCheck(trace, run.hyper.gamma);
      CheckReport r = MakeReport("violation_bound", 1e-9);
      r.rounds = trace.length();
      r.samples = trace.num_constraints;
      r.Record(b.max_violation - b.bound);
      reports.push_back(r);
    } else if (name == "alpha") {
      reports.push_back(CheckAlphaSchedule(
          trace, MakeScheduleConstants(p.constants, run.hyper), variant));
    } else if (name == "dpp") {
      CheckReport r = MakeReport("dpp", 1e-8);
      for (int i : PickRounds(trace.length(), kCheckRounds, rng)) {
        r.Merge(CheckDppBound(trace.snapshots[i], p,
                              SamplePoints(p.base, kZPerRound, rng)));
      }
      reports.push_back(r);
    } else if (name == "pushback") {
      CheckReport r = MakeReport("pushback", 1e-8);
      for (int i : PickRounds(trace.length(), kCheckRounds, rng)) {
        r.Merge(CheckRoundPushback(trace.snapshots[i], p,
                                   SamplePoints(p.base, kZPerRound, rng)));
      }
      reports.push_back(r);
      CheckReport random = CheckPushbackRandom(
          p.geometry, p.base, kRandomPushbackInstances, kZPerRound, rng);
      random.name = "pushback_random";
      reports.push_back(random);
    } else if (name == "mixing") {
      CheckReport r = MakeReport("mixing", 1e-9);
      for (const RoundSnapshot& s : trace.snapshots) {
        r.Merge(CheckMixing(s.anchor, s.mixing,
                            SamplePoints(p.base, kZPerRound, rng)));
      }
      reports.push_back(r);
    } else if (name == "simplex") {
      reports.push_back(CheckSimplexIterates(trace));
    } else if (name == "descent") {
      reports.push_back(CheckLossDescent(*p.losses,
                                         p.constants.loss_smoothness,
                                         p.geometry, p.base, kDescentPairs,
                                         kDescentRounds, rng));
      if (p.num_constraints() > 0) {
        reports.push_back(CheckConstraintDescent(
            p.constraints, p.constants.constraint_smoothness, p.geometry,
            p.base, kDescentPairs, rng));
      }
    }
  }
  return reports;
}

}  // namespace opmp
