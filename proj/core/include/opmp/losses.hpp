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
#include <functional>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "opmp/geometry.hpp"

namespace opmp {

struct LossConstants {
  double gradient_bound = 0.0;      // F: sup |grad f^t(x)|_*
  double gradient_lipschitz = 0.0;  // L_f
};

enum class LossFamily {
  kFixed,
  kLinearDrift,
  kAlternating,
  kQuadraticDrift,
  kLinearJitter,
  kCustom,
};

std::string_view ToString(LossFamily family);
std::optional<LossFamily> ParseLossFamily(std::string_view name);

// f(x) = 1/2 sum_i curvature_i x_i^2 + <linear, x> + offset
struct DiagonalQuadratic {
  Vector curvature;
  Vector linear;
  double offset = 0.0;

  double Value(const Vector& x) const;
  Vector Gradient(const Vector& x) const;
};

/// A sequence of convex losses f^1, ..., f^T revealed one per round.
///
/// Round 0 is defined as a copy of round 1 so that the first optimistic step
/// has a gradient to use and the first variation term vanishes.
class LossSequence {
 public:
  virtual ~LossSequence() = default;

  virtual LossFamily family() const = 0;
  virtual int horizon() const = 0;
  virtual int dim() const = 0;

  virtual double Value(int t, const Vector& x) const = 0;
  virtual Vector Gradient(int t, const Vector& x) const = 0;

  virtual LossConstants Constants(const Geometry& geom,
                                  const BaseSet& base) const = 0;

  /// V(T) = sum_t max_x |grad f^t(x) - grad f^{t-1}(x)|_*^2, exact when the
  /// curvature does not change between rounds and a certified overestimate
  /// otherwise. Throws UnsupportedError when no bound is known.
  virtual double GradientVariation(const Geometry& geom,
                                   const BaseSet& base) const;

  // sum_{t=1}^T f^t in closed form, when the family has one.
  virtual std::optional<DiagonalQuadratic> Aggregate() const {
    return std::nullopt;
  }
};

using LossSequencePtr = std::shared_ptr<const LossSequence>;

/// Every built-in family: each round is a DiagonalQuadratic.
class DiagonalQuadraticSequence final : public LossSequence {
 public:
  // rounds[i] is f^{i+1}. A single entry is repeated for every round.
  DiagonalQuadraticSequence(LossFamily family, int horizon,
                            std::vector<DiagonalQuadratic> rounds);

  LossFamily family() const override { return family_; }
  int horizon() const override { return horizon_; }
  int dim() const override { return dim_; }

  const DiagonalQuadratic& Round(int t) const;

  double Value(int t, const Vector& x) const override;
  Vector Gradient(int t, const Vector& x) const override;
  LossConstants Constants(const Geometry& geom,
                          const BaseSet& base) const override;
  double GradientVariation(const Geometry& geom,
                           const BaseSet& base) const override;
  std::optional<DiagonalQuadratic> Aggregate() const override;

 private:
  LossFamily family_;
  int horizon_;
  int dim_;
  std::vector<DiagonalQuadratic> rounds_;
};

/// Arbitrary oracle-defined losses. Constants are caller-declared.
class CustomLossSequence final : public LossSequence {
 public:
  using ValueFn = std::function<double(int, const Vector&)>;
  using GradientFn = std::function<Vector(int, const Vector&)>;

  CustomLossSequence(int dim, int horizon, ValueFn value, GradientFn gradient,
                     LossConstants constants,
                     std::optional<double> variation_bound = std::nullopt);

  LossFamily family() const override { return LossFamily::kCustom; }
  int horizon() const override { return horizon_; }
  int dim() const override { return dim_; }
  double Value(int t, const Vector& x) const override;
  Vector Gradient(int t, const Vector& x) const override;
  LossConstants Constants(const Geometry&, const BaseSet&) const override {
    return constants_;
  }
  double GradientVariation(const Geometry& geom,
                           const BaseSet& base) const override;

 private:
  int dim_;
  int horizon_;
  ValueFn value_;
  GradientFn gradient_;
  LossConstants constants_;
  std::optional<double> variation_bound_;
};

// f^t(x) = <c, x>
LossSequencePtr MakeFixedLinear(Vector c, int horizon);
// f^t(x) = scale * |x - target|_2^2
LossSequencePtr MakeFixedQuadratic(Vector target, double scale, int horizon);
// f^t(x) = <c + (t / T) u, x>
LossSequencePtr MakeLinearDrift(Vector c, Vector u, int horizon);
// f^t(x) = <c, x> on odd rounds and <c_alt, x> on even rounds
LossSequencePtr MakeAlternating(Vector c, Vector c_alt, int horizon);
// f^t(x) = s_t |x - m_t|_2^2 with s_t = scale + (t/T) scale_shift and
// m_t = target + (t/T) target_shift
LossSequencePtr MakeQuadraticDrift(Vector target, Vector target_shift,
                                   double scale, double scale_shift,
                                   int horizon);
// f^t(x) = <c + sigma T^{-exponent} u_t, x>, u_t iid uniform on [-1, 1]^d
LossSequencePtr MakeLinearJitter(Vector c, double sigma, double exponent,
                                 int horizon, std::uint64_t seed);

}  // namespace opmp
