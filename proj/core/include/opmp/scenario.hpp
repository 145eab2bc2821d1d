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
#include <string_view>
#include <vector>

#include "opmp/algorithm.hpp"
#include "opmp/baseline.hpp"
#include "opmp/geometry.hpp"
#include "opmp/problem.hpp"

namespace opmp {

enum class AlgorithmKind { kOmpd, kOmpdSimplex, kPdBaseline };

std::string_view ToString(AlgorithmKind kind);

struct BaseSetSpec {
  BaseSetKind kind = BaseSetKind::kBall;
  std::vector<double> center;  // ball
  double radius = 1.0;         // ball
  std::vector<double> lower;   // box
  std::vector<double> upper;   // box
  int dim = 0;                 // simplex

  bool operator==(const BaseSetSpec&) const = default;
};

enum class ConstraintKind { kLinear, kQuadratic };

struct ConstraintSpec {
  ConstraintKind kind = ConstraintKind::kLinear;
  std::vector<double> a;       // linear: <a, x> - b
  double b = 0.0;
  std::vector<double> center;  // quadratic: |x - center|^2 - radius^2
  double radius = 0.0;

  bool operator==(const ConstraintSpec&) const = default;
};

struct SlaterSpec {
  std::vector<double> point;
  double margin = 0.0;

  bool operator==(const SlaterSpec&) const = default;
};

/// Parameters of a built-in loss family. Which fields are required depends on
/// the family:
///   fixed            c (linear) or target + scale (quadratic)
///   linear-drift     c, u
///   alternating      c, c_alt
///   quadratic-drift  target, target_shift, scale, scale_shift
///   linear-jitter    c, sigma, exponent (noise seeded by the scenario seed)
struct LossSpec {
  LossFamily family = LossFamily::kFixed;
  std::vector<double> c;
  std::vector<double> c_alt;
  std::vector<double> u;
  std::vector<double> target;
  std::vector<double> target_shift;
  std::optional<double> scale;
  std::optional<double> scale_shift;
  std::optional<double> sigma;
  std::optional<double> exponent;

  bool operator==(const LossSpec&) const = default;
};

struct ScenarioConfig {
  std::string scenario_id;
  GeometryKind geometry = GeometryKind::kEuclidean;
  BaseSetSpec base_set;
  std::vector<ConstraintSpec> constraints;
  std::optional<SlaterSpec> slater;
  LossSpec loss;
  int horizon = 1;
  std::uint64_t seed = 0;
  AlgorithmKind algorithm = AlgorithmKind::kOmpd;
  std::optional<double> v_cap;  // absent: exact value from the loss family
  ConstantOverrides constants;
  BaselineParams baseline;
  std::string output = "out";

  bool operator==(const ScenarioConfig&) const = default;
};

/// Parses and validates a JSON scenario. Throws ValidationError listing every
/// offending field.
ScenarioConfig ParseScenario(std::string_view json_text);
ScenarioConfig LoadScenario(const std::string& path);

/// Canonical JSON text; ParseScenario(SerializeScenario(c)) == c.
std::string SerializeScenario(const ScenarioConfig& config, int indent = 2);

/// Throws ValidationError listing every problem found.
void ValidateScenario(const ScenarioConfig& config);

// FNV-1a of the compact canonical serialization.
std::uint64_t ConfigHash(const ScenarioConfig& config);

BaseSet BuildBaseSet(const ScenarioConfig& config);
LossSequencePtr BuildLosses(const ScenarioConfig& config);
Problem BuildProblem(const ScenarioConfig& config);

Variant VariantOf(AlgorithmKind kind);

/// The cap used for eta and gamma: the configured value, or the family's
/// exact / overestimated gradient variation.
double ResolveVariationCap(const ScenarioConfig& config, const Problem& problem);

HyperParams BuildHyperParams(const ScenarioConfig& config,
                             const Problem& problem);

}  // namespace opmp
