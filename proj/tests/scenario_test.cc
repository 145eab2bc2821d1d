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

#include "opmp/scenario.hpp"

#include <string>

#include "gtest/gtest.h"
#include "opmp/errors.hpp"

namespace opmp {
namespace {

std::string ScenarioPath(const std::string& name) {
  return std::string(OPMP_SCENARIO_DIR) + "/" + name + ".json";
}

class ShippedScenarioTest : public ::testing::TestWithParam<std::string> {};

TEST_P(ShippedScenarioTest, RoundTripsAndBuilds) {
  const ScenarioConfig config = LoadScenario(ScenarioPath(GetParam()));
  EXPECT_EQ(config.scenario_id, GetParam());
  const ScenarioConfig again = ParseScenario(SerializeScenario(config));
  EXPECT_EQ(again, config);
  EXPECT_EQ(ConfigHash(again), ConfigHash(config));
  const Problem p = BuildProblem(config);
  EXPECT_EQ(p.horizon(), config.horizon);
  EXPECT_EQ(p.num_constraints(), static_cast<int>(config.constraints.size()));
  const HyperParams hp = BuildHyperParams(config, p);
  EXPECT_GT(hp.eta, 0.0);
  EXPECT_GT(hp.gamma, 0.0);
  EXPECT_EQ(hp.mixing.has_value(),
            config.algorithm == AlgorithmKind::kOmpdSimplex);
}

INSTANTIATE_TEST_SUITE_P(All, ShippedScenarioTest,
                         ::testing::Values("golden_d2", "fixed_quadratic_ball",
                                           "slow_drift_linear",
                                           "adversarial_alternating",
                                           "simplex_d10",
                                           "box_quadratic_drift"));

constexpr const char* kMinimal = R"({
  "scenario_id": "mini",
  "base_set": {"kind": "ball", "center": [0, 0], "radius": 1},
  "loss": {"family": "fixed", "c": [1, 0]},
  "T": 5,
  "algorithm": "ompd"
})";

TEST(ParseScenarioTest, Defaults) {
  const ScenarioConfig c = ParseScenario(kMinimal);
  EXPECT_EQ(c.geometry, GeometryKind::kEuclidean);
  EXPECT_EQ(c.seed, 0u);
  EXPECT_FALSE(c.v_cap.has_value());
  EXPECT_TRUE(c.constraints.empty());
  EXPECT_EQ(c.baseline, BaselineParams{});
}

TEST(ParseScenarioTest, SimplexDefaultsToEntropic) {
  const ScenarioConfig c = ParseScenario(R"({
    "scenario_id": "s",
    "base_set": {"kind": "simplex", "dim": 3},
    "loss": {"family": "fixed", "c": [1, 0, 0]},
    "T": 5,
    "algorithm": "ompd-simplex"
  })");
  EXPECT_EQ(c.geometry, GeometryKind::kEntropic);
}

void ExpectInvalid(const std::string& text, const std::string& needle) {
  try {
    ParseScenario(text);
    FAIL() << "expected ValidationError for " << needle;
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find(needle), std::string::npos)
        << e.what();
  }
}

TEST(ParseScenarioTest, ValidationErrors) {
  ExpectInvalid(R"({"scenario_id": "x",
    "base_set": {"kind": "ball", "center": [0, 0], "radius": 1},
    "loss": {"family": "fixed", "c": [1, 0]}, "T": 0, "algorithm": "ompd"})",
                "T");
  ExpectInvalid(R"({"scenario_id": "x",
    "base_set": {"kind": "ball", "center": [0, 0], "radius": 1},
    "loss": {"family": "fixed", "c": [1, 0]}, "T": 3,
    "algorithm": "ompd-simplex"})",
                "algorithm");
  ExpectInvalid(R"({"scenario_id": "x",
    "base_set": {"kind": "ball", "center": [0, 0], "radius": 1},
    "loss": {"family": "fixed", "c": [1, 0]}, "T": 3, "algorithm": "ompd", "colour": 1})",
                "colour");
  ExpectInvalid(R"({"scenario_id": "x",
    "base_set": {"kind": "ball", "center": [0, 0], "radius": 1},
    "loss": {"family": "fixed", "c": [1, 0, 2]}, "T": 3, "algorithm": "ompd"})",
                "loss");
  ExpectInvalid("{not json", "");
}

TEST(BuildProblemTest, RejectsWrongSlaterPoint) {
  const ScenarioConfig c = ParseScenario(R"({"scenario_id": "x",
    "base_set": {"kind": "ball", "center": [0, 0], "radius": 1},
    "constraints": [{"kind": "linear", "a": [1, 0], "b": 0.3}],
    "slater": {"point": [0.5, 0], "margin": 0.1},
    "loss": {"family": "fixed", "c": [1, 0]}, "T": 3, "algorithm": "ompd"})");
  EXPECT_THROW(BuildProblem(c), ValidationError);
}

TEST(ParseScenarioTest, ReportsEveryProblem) {
  try {
    LoadScenario(std::string(OPMP_TEST_DATA_DIR) + "/invalid_t0.json");
    FAIL();
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("T"), std::string::npos) << what;
    EXPECT_NE(what.find("algorithm"), std::string::npos) << what;
  }
}

TEST(ParseScenarioTest, VariationCapForms) {
  std::string text = kMinimal;
  text.insert(text.rfind('}'), R"(, "v_cap": "exact")");
  EXPECT_FALSE(ParseScenario(text).v_cap.has_value());
  text = kMinimal;
  text.insert(text.rfind('}'), R"(, "v_cap": 2.5)");
  EXPECT_EQ(ParseScenario(text).v_cap, 2.5);
}

TEST(ConfigHashTest, SensitiveToContent) {
  ScenarioConfig a = ParseScenario(kMinimal);
  ScenarioConfig b = a;
  EXPECT_EQ(ConfigHash(a), ConfigHash(b));
  b.seed = 1;
  EXPECT_NE(ConfigHash(a), ConfigHash(b));
}

TEST(LoadScenarioTest, MissingFile) {
  EXPECT_THROW(LoadScenario("/nonexistent/scenario.json"), std::exception);
}

}  // namespace
}  // namespace opmp
