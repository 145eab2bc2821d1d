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
#include <random>
#include <utility>
#include <vector>

#include "opmp/geometry.hpp"

namespace opmp {

using Rng = std::mt19937_64;

/// Full-support sampling on a base set: uniform on balls and boxes,
/// Dirichlet(1, ..., 1) on the simplex.
Vector SampleUniform(const BaseSet& base, Rng& rng);

std::vector<Vector> SamplePoints(const BaseSet& base, int count, Rng& rng);

std::vector<std::pair<Vector, Vector>> SamplePairs(const BaseSet& base,
                                                   int count, Rng& rng);

}  // namespace opmp
