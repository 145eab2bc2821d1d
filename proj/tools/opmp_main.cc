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

// opmp: run, sweep and check scenarios from the command line.
//
// Exit status: 0 when everything requested passed, 1 on a failed check or a
// runtime error, 2 on a usage or configuration error.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "opmp/errors.hpp"
#include "opmp/harness.hpp"
#include "opmp/metrics.hpp"
#include "opmp/scenario.hpp"
#include "opmp/theory_checks.hpp"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

std::vector<int> ParseHorizons(const std::string& text) {
  std::vector<int> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(',', start), text.size());
    const std::string item = text.substr(start, end - start);
    std::size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || item.empty() || value < 1) {
      throw opmp::ValidationError(fmt::format("bad --T entry '{}'", item));
    }
    out.push_back(value);
    start = end + 1;
  }
  return out;
}

// "0..4" (inclusive) or "0,3,7".
std::vector<std::uint64_t> ParseSeeds(const std::string& text) {
  auto number = [&](const std::string& item) {
    std::size_t used = 0;
    unsigned long long value = 0;
    try {
      value = std::stoull(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (item.empty() || used != item.size() || item[0] == '-') {
      throw opmp::ValidationError(fmt::format("bad --seeds entry '{}'", item));
    }
    return static_cast<std::uint64_t>(value);
  };
  std::vector<std::uint64_t> out;
  if (const std::size_t dots = text.find(".."); dots != std::string::npos) {
    const std::uint64_t lo = number(text.substr(0, dots));
    const std::uint64_t hi = number(text.substr(dots + 2));
    if (hi < lo) throw opmp::ValidationError("--seeds range is empty");
    for (std::uint64_t s = lo; s <= hi; ++s) out.push_back(s);
    return out;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(',', start), text.size());
    out.push_back(number(text.substr(start, end - start)));
    start = end + 1;
  }
  return out;
}

std::string Optional(const std::optional<double>& v) {
  return v ? opmp::FormatDouble(*v) : std::string("absent");
}

int CmdRun(const std::string& config_path, std::optional<std::uint64_t> seed,
           std::optional<std::string> out) {
  opmp::ScenarioConfig config = opmp::LoadScenario(config_path);
  if (seed) config.seed = *seed;
  const std::string dir = out.value_or(config.output);
  const opmp::ScenarioRun run = opmp::RunScenario(config, dir);
  const opmp::SummaryRow& s = run.summary;
  fmt::print("{} T={} seed={} regret={} max_violation={} queue_bound={} "
             "V_cap={} V_empirical={}\n",
             s.scenario_id, s.horizon, config.seed, opmp::FormatDouble(s.regret),
             opmp::FormatDouble(s.max_violation),
             opmp::FormatDouble(s.queue_bound), opmp::FormatDouble(s.v_cap),
             opmp::FormatDouble(s.v_empirical));
  fmt::print("wrote {}/{}\n", dir, opmp::RoundCsvName(config));
  return 0;
}

int CmdSweep(const std::string& config_path, const std::string& horizons,
             const std::string& seeds, std::optional<std::string> out,
             int threads) {
  opmp::SweepSpec spec;
  spec.base = opmp::LoadScenario(config_path);
  spec.horizons = ParseHorizons(horizons);
  spec.seeds = ParseSeeds(seeds);
  spec.out_dir = out.value_or(spec.base.output);
  spec.threads = threads;
  const opmp::SweepResult result = opmp::Sweep(spec);
  for (const opmp::SweepPoint& p : result.points) {
    fmt::print("T={} mean_regret={} mean_max_violation={}\n", p.horizon,
               opmp::FormatDouble(p.mean_regret),
               opmp::FormatDouble(p.mean_max_violation));
  }
  fmt::print("regret_slope={} violation_slope={} violation_offset={}\n",
             Optional(result.regret_slope), Optional(result.violation_slope),
             opmp::FormatDouble(result.violation_offset));
  return 0;
}

int CmdCheck(const std::string& config_path, const std::string& lemmas,
             std::optional<std::uint64_t> seed,
             std::optional<std::string> out) {
  opmp::ScenarioConfig config = opmp::LoadScenario(config_path);
  if (seed) config.seed = *seed;
  const auto reports = opmp::RunChecks(config, opmp::ParseLemmaList(lemmas));
  bool ok = true;
  for (const opmp::CheckReport& r : reports) {
    ok = ok && r.pass;
    fmt::print("{} {} rounds={} samples={} max_residual={} tolerance={}{}\n",
               r.pass ? "PASS" : "FAIL", r.name, r.rounds, r.samples,
               opmp::FormatDouble(r.max_residual),
               opmp::FormatDouble(r.tolerance),
               r.skipped > 0 ? fmt::format(" skipped={}", r.skipped) : "");
  }
  if (out) {
    std::ofstream file(*out, std::ios::binary);
    if (!file) throw std::runtime_error(fmt::format("cannot write '{}'", *out));
    opmp::WriteCheckHeader(file);
    for (const opmp::CheckReport& r : reports) opmp::WriteCheckRow(file, r);
  }
  return ok ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online primal-dual mirror prox: runs, sweeps and checks"};
  app.require_subcommand(1);

  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;

  CLI::App* run = app.add_subcommand("run", "run one scenario");
  run->add_option("--config", config, "scenario JSON file")->required();
  run->add_option("--seed", seed, "override the scenario seed");
  run->add_option("--out", out, "output directory");

  std::string horizons;
  std::string seeds = "0";
  int threads = 0;
  CLI::App* sweep = app.add_subcommand("sweep", "run a (T, seed) grid");
  sweep->add_option("--config", config, "scenario JSON file")->required();
  sweep->add_option("--T", horizons, "comma separated horizons")->required();
  sweep->add_option("--seeds", seeds, "seed range a..b or comma list");
  sweep->add_option("--out", out, "output directory");
  sweep->add_option("--threads", threads, "worker threads (default OPMP_THREADS)");

  std::string lemmas = "all";
  CLI::App* check = app.add_subcommand("check", "verify lemma inequalities");
  check->add_option("--config", config, "scenario JSON file")->required();
  check->add_option("--lemmas", lemmas,
                    "all, or a comma list of queue,violation,alpha,dpp,"
                    "pushback,mixing,simplex,descent");
  check->add_option("--seed", seed, "override the scenario seed");
  check->add_option("--out", out, "write the check CSV to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*run) return CmdRun(config, seed, out);
    if (*sweep) return CmdSweep(config, horizons, seeds, out, threads);
    return CmdCheck(config, lemmas, seed, out);
  } catch (const opmp::ValidationError& e) {
    std::fprintf(stderr, "opmp: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "opmp: error: %s\n", e.what());
    return kExitFailure;
  }
}
