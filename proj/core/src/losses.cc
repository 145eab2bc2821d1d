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

#include "opmp/losses.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>

#include <fmt/format.h>

#include "opmp/errors.hpp"

namespace opmp {

namespace {

constexpr std::pair<LossFamily, std::string_view> kFamilyNames[] = {
    {LossFamily::kFixed, "fixed"},
    {LossFamily::kLinearDrift, "linear-drift"},
    {LossFamily::kAlternating, "alternating"},
    {LossFamily::kQuadraticDrift, "quadratic-drift"},
    {LossFamily::kLinearJitter, "linear-jitter"},
    {LossFamily::kCustom, "custom"},
};

void RequireHorizon(int horizon) {
  if (horizon < 1) throw ArgumentError("loss horizon must be at least 1");
}

void RequireRound(int t, int horizon) {
  if (t < 0 || t > horizon) {
    throw ArgumentError(
        fmt::format("loss round {} outside [0, {}]", t, horizon));
  }
}

DiagonalQuadratic Linear(Vector c) {
  const auto d = c.size();
  return {Vector::Zero(d), std::move(c), 0.0};
}

// scale * |x - target|^2
DiagonalQuadratic Squared(const Vector& target, double scale) {
  const auto d = target.size();
  return {Vector::Constant(d, 2.0 * scale), -2.0 * scale * target,
          scale * target.squaredNorm()};
}

}  // namespace

std::string_view ToString(LossFamily family) {
  for (const auto& [f, name] : kFamilyNames) {
    if (f == family) return name;
  }
  return "?";
}

std::optional<LossFamily> ParseLossFamily(std::string_view name) {
  for (const auto& [f, n] : kFamilyNames) {
    if (n == name) return f;
  }
  return std::nullopt;
}

double DiagonalQuadratic::Value(const Vector& x) const {
  return 0.5 * x.dot(curvature.cwiseProduct(x)) + linear.dot(x) + offset;
}

Vector DiagonalQuadratic::Gradient(const Vector& x) const {
  return curvature.cwiseProduct(x) + linear;
}

double LossSequence::GradientVariation(const Geometry&, const BaseSet&) const {
  throw UnsupportedError(fmt::format(
      "loss family '{}' has no gradient variation bound", ToString(family())));
}

DiagonalQuadraticSequence::DiagonalQuadraticSequence(
    LossFamily family, int horizon, std::vector<DiagonalQuadratic> rounds)
    : family_(family), horizon_(horizon), rounds_(std::move(rounds)) {
  RequireHorizon(horizon);
  if (rounds_.size() != 1 && rounds_.size() != static_cast<std::size_t>(horizon)) {
    throw ArgumentError("need one round or exactly horizon rounds");
  }
  dim_ = static_cast<int>(rounds_.front().linear.size());
  if (dim_ == 0) throw ArgumentError("loss dimension must be positive");
  for (const auto& r : rounds_) {
    if (r.linear.size() != dim_ || r.curvature.size() != dim_) {
      throw ArgumentError("loss rounds have inconsistent dimensions");
    }
    if (!r.linear.allFinite() || !r.curvature.allFinite() ||
        !std::isfinite(r.offset)) {
      throw ArgumentError("loss coefficients must be finite");
    }
    if ((r.curvature.array() < 0.0).any()) {
      throw ArgumentError("loss curvature must be nonnegative (convexity)");
    }
  }
}

const DiagonalQuadratic& DiagonalQuadraticSequence::Round(int t) const {
  RequireRound(t, horizon_);
  if (rounds_.size() == 1) return rounds_.front();
  return rounds_[std::max(t, 1) - 1];
}

double DiagonalQuadraticSequence::Value(int t, const Vector& x) const {
  if (x.size() != dim_) throw ArgumentError("loss value: dimension mismatch");
  return Round(t).Value(x);
}

Vector DiagonalQuadraticSequence::Gradient(int t, const Vector& x) const {
  if (x.size() != dim_) {
    throw ArgumentError("loss gradient: dimension mismatch");
  }
  return Round(t).Gradient(x);
}

LossConstants DiagonalQuadraticSequence::Constants(const Geometry& geom,
                                                   const BaseSet& base) const {
  CheckCompatible(geom, base);
  const Vector center = base.Center();
  const double spread = base.RadiusAroundCenter(geom.dual_norm());
  LossConstants out;
  for (const auto& r : rounds_) {
    const double curvature = r.curvature.cwiseAbs().maxCoeff();
    out.gradient_bound =
        std::max(out.gradient_bound,
                 geom.DualNorm(r.Gradient(center)) + curvature * spread);
    out.gradient_lipschitz = std::max(out.gradient_lipschitz, curvature);
  }
  return out;
}

double DiagonalQuadraticSequence::GradientVariation(const Geometry& geom,
                                                    const BaseSet& base) const {
  CheckCompatible(geom, base);
  if (rounds_.size() == 1) return 0.0;
  const Vector center = base.Center();
  const double spread = base.RadiusAroundCenter(geom.dual_norm());
  double total = 0.0;
  for (int t = 2; t <= horizon_; ++t) {
    const auto& now = rounds_[t - 1];
    const auto& before = rounds_[t - 2];
    const Vector dh = now.curvature - before.curvature;
    const Vector dc = now.linear - before.linear;
    double term = 0.0;
    if (dh.isZero(0.0)) {
      term = geom.DualNorm(dc);
    } else {
      // |dh * x + dc|_* <= |dh * x0 + dc|_* + max|dh| |x - x0|_*
      term = geom.DualNorm(dh.cwiseProduct(center) + dc) +
             dh.cwiseAbs().maxCoeff() * spread;
    }
    total += term * term;
  }
  return total;
}

std::optional<DiagonalQuadratic> DiagonalQuadraticSequence::Aggregate() const {
  if (rounds_.size() == 1) {
    const double n = horizon_;
    const auto& r = rounds_.front();
    return DiagonalQuadratic{n * r.curvature, n * r.linear, n * r.offset};
  }
  DiagonalQuadratic sum{Vector::Zero(dim_), Vector::Zero(dim_), 0.0};
  for (const auto& r : rounds_) {
    sum.curvature += r.curvature;
    sum.linear += r.linear;
    sum.offset += r.offset;
  }
  return sum;
}

CustomLossSequence::CustomLossSequence(int dim, int horizon, ValueFn value,
                                       GradientFn gradient,
                                       LossConstants constants,
                                       std::optional<double> variation_bound)
    : dim_(dim),
      horizon_(horizon),
      value_(std::move(value)),
      gradient_(std::move(gradient)),
      constants_(constants),
      variation_bound_(variation_bound) {
  RequireHorizon(horizon);
  if (dim <= 0) throw ArgumentError("loss dimension must be positive");
  if (!value_ || !gradient_) throw ArgumentError("custom loss oracle is empty");
}

double CustomLossSequence::Value(int t, const Vector& x) const {
  RequireRound(t, horizon_);
  return value_(std::max(t, 1), x);
}

Vector CustomLossSequence::Gradient(int t, const Vector& x) const {
  RequireRound(t, horizon_);
  return gradient_(std::max(t, 1), x);
}

double CustomLossSequence::GradientVariation(const Geometry& geom,
                                             const BaseSet& base) const {
  if (variation_bound_) return *variation_bound_;
  return LossSequence::GradientVariation(geom, base);
}

LossSequencePtr MakeFixedLinear(Vector c, int horizon) {
  std::vector<DiagonalQuadratic> rounds{Linear(std::move(c))};
  return std::make_shared<DiagonalQuadraticSequence>(LossFamily::kFixed,
                                                     horizon, std::move(rounds));
}

LossSequencePtr MakeFixedQuadratic(Vector target, double scale, int horizon) {
  if (!(scale >= 0.0)) throw ArgumentError("quadratic scale must be >= 0");
  std::vector<DiagonalQuadratic> rounds{Squared(target, scale)};
  return std::make_shared<DiagonalQuadraticSequence>(LossFamily::kFixed,
                                                     horizon, std::move(rounds));
}

LossSequencePtr MakeLinearDrift(Vector c, Vector u, int horizon) {
  RequireHorizon(horizon);
  if (c.size() != u.size()) throw ArgumentError("drift dimension mismatch");
  std::vector<DiagonalQuadratic> rounds;
  rounds.reserve(horizon);
  for (int t = 1; t <= horizon; ++t) {
    rounds.push_back(Linear(c + (static_cast<double>(t) / horizon) * u));
  }
  return std::make_shared<DiagonalQuadraticSequence>(
      LossFamily::kLinearDrift, horizon, std::move(rounds));
}

LossSequencePtr MakeAlternating(Vector c, Vector c_alt, int horizon) {
  RequireHorizon(horizon);
  if (c.size() != c_alt.size()) {
    throw ArgumentError("alternating dimension mismatch");
  }
  std::vector<DiagonalQuadratic> rounds;
  rounds.reserve(horizon);
  for (int t = 1; t <= horizon; ++t) {
    rounds.push_back(Linear(t % 2 == 1 ? c : c_alt));
  }
  return std::make_shared<DiagonalQuadraticSequence>(
      LossFamily::kAlternating, horizon, std::move(rounds));
}

LossSequencePtr MakeQuadraticDrift(Vector target, Vector target_shift,
                                   double scale, double scale_shift,
                                   int horizon) {
  RequireHorizon(horizon);
  if (target.size() != target_shift.size()) {
    throw ArgumentError("quadratic drift dimension mismatch");
  }
  std::vector<DiagonalQuadratic> rounds;
  rounds.reserve(horizon);
  for (int t = 1; t <= horizon; ++t) {
    const double frac = static_cast<double>(t) / horizon;
    const double s = scale + frac * scale_shift;
    if (!(s >= 0.0)) {
      throw ArgumentError(fmt::format("quadratic drift scale {} < 0 at t={}", s, t));
    }
    rounds.push_back(Squared(target + frac * target_shift, s));
  }
  return std::make_shared<DiagonalQuadraticSequence>(
      LossFamily::kQuadraticDrift, horizon, std::move(rounds));
}

LossSequencePtr MakeLinearJitter(Vector c, double sigma, double exponent,
                                 int horizon, std::uint64_t seed) {
  RequireHorizon(horizon);
  if (!(sigma >= 0.0)) throw ArgumentError("jitter sigma must be >= 0");
  const double amplitude =
      sigma * std::pow(static_cast<double>(horizon), -exponent);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<DiagonalQuadratic> rounds;
  rounds.reserve(horizon);
  for (int t = 1; t <= horizon; ++t) {
    Vector noise(c.size());
    for (Eigen::Index i = 0; i < c.size(); ++i) noise[i] = unit(rng);
    rounds.push_back(Linear(c + amplitude * noise));
  }
  return std::make_shared<DiagonalQuadraticSequence>(
      LossFamily::kLinearJitter, horizon, std::move(rounds));
}

}  // namespace opmp
