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

#include "opmp/sampling.hpp"

#include <cmath>

namespace opmp {

Vector SampleUniform(const BaseSet& base, Rng& rng) {
  const int d = base.dim();
  Vector x(d);
  switch (base.kind()) {
    case BaseSetKind::kBall: {
      std::normal_distribution<double> normal(0.0, 1.0);
      for (int i = 0; i < d; ++i) x[i] = normal(rng);
      double n = x.norm();
      while (n == 0.0) {
        for (int i = 0; i < d; ++i) x[i] = normal(rng);
        n = x.norm();
      }
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      const double radius =
          base.ball_radius() * std::pow(unit(rng), 1.0 / static_cast<double>(d));
      return base.ball_center() + x * (radius / n);
    }
    case BaseSetKind::kBox: {
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      for (int i = 0; i < d; ++i) {
        x[i] = base.box_lower()[i] +
               unit(rng) * (base.box_upper()[i] - base.box_lower()[i]);
      }
      return x;
    }
    case BaseSetKind::kSimplex: {
      std::exponential_distribution<double> expo(1.0);
      for (int i = 0; i < d; ++i) x[i] = expo(rng);
      return x / x.sum();
    }
  }
  return x;
}

std::vector<Vector> SamplePoints(const BaseSet& base, int count, Rng& rng) {
  std::vector<Vector> points;
  points.reserve(count);
  for (int i = 0; i < count; ++i) points.push_back(SampleUniform(base, rng));
  return points;
}

std::vector<std::pair<Vector, Vector>> SamplePairs(const BaseSet& base,
                                                   int count, Rng& rng) {
  std::vector<std::pair<Vector, Vector>> pairs;
  pairs.reserve(count);
  for (int i = 0; i < count; ++i) {
    Vector x = SampleUniform(base, rng);
    Vector y = SampleUniform(base, rng);
    pairs.emplace_back(std::move(x), std::move(y));
  }
  return pairs;
}

}  // namespace opmp
