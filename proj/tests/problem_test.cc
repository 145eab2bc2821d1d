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

#include <cmath>
#include <memory>
#include <vector>

#include "gtest/gtest.h"
#include "opmp/constraints.hpp"
#include "opmp/errors.hpp"
#include "opmp/geometry.hpp"
#include "opmp/losses.hpp"
#include "opmp/problem.hpp"
#include "opmp/sampling.hpp"

namespace opmp {
namespace {

Vector V2(double a, double b) { return Vector{{a, b}}; }

// Central finite-difference gradient.
Vector FiniteDifference(const std::function<double(const Vector&)>& f,
                        const Vector& x, double step = 1e-6) {
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vector up = x, down = x;
    up[i] += step;
    down[i] -= step;
    g[i] = (f(up) - f(down)) / (2 * step);
  }
  return g;
}

TEST(ConstraintEvalTest, LinearExamples) {
  const ConstraintBlock block(2, {LinearConstraint{V2(1, 1), 1.0}});
  const ConstraintEval at_half = block.Eval(V2(0.5, 0.5));
  EXPECT_DOUBLE_EQ(at_half.values[0], 0.0);
  EXPECT_EQ(Vector(at_half.jacobian.row(0).transpose()), V2(1, 1));
  EXPECT_DOUBLE_EQ(block.Eval(V2(0, 0)).values[0], -1.0);
}

TEST(ConstraintEvalTest, QuadraticMatchesFiniteDifferences) {
  const ConstraintBlock block(2, {QuadraticConstraint{V2(0, 0), 0.5}});
  const ConstraintEval e = block.Eval(V2(0.5, 0));
  EXPECT_NEAR(e.values[0], 0.0, 1e-15);
  EXPECT_TRUE(Vector(e.jacobian.row(0).transpose()).isApprox(V2(1, 0)));
  const Vector fd = FiniteDifference(
      [&](const Vector& x) { return block.Values(x)[0]; }, V2(0.5, 0));
  EXPECT_NEAR((fd - V2(1, 0)).norm(), 0.0, 1e-8);

  Rng rng(3);
  const BaseSet ball = BaseSet::Ball(V2(0, 0), 1);
  for (const Vector& x : SamplePoints(ball, 50, rng)) {
    const Vector analytic = block.Eval(x).jacobian.row(0).transpose();
    const Vector numeric = FiniteDifference(
        [&](const Vector& y) { return block.Values(y)[0]; }, x);
    EXPECT_LE((analytic - numeric).norm(), 1e-7);
  }
}

TEST(ConstraintEvalTest, DimensionMismatch) {
  const ConstraintBlock block(2, {LinearConstraint{V2(1, 1), 1.0}});
  EXPECT_THROW(block.Eval(Vector::Zero(3)), ArgumentError);
  EXPECT_THROW(ConstraintBlock(3, {LinearConstraint{V2(1, 1), 1.0}}),
               ArgumentError);
}

TEST(ConstraintEvalTest, NonFiniteCustomValueIsDataError) {
  CustomConstraint bad{[](const Vector&) { return std::nan(""); },
                       [](const Vector& x) { return Vector::Zero(x.size()); }};
  const ConstraintBlock block(2, {bad});
  EXPECT_THROW(block.Eval(V2(0, 0)), DataError);
}

TEST(SlaterTest, CertificateIsValidated) {
  ConstraintBlock block(2, {LinearConstraint{V2(1, 0), 0.3}});
  EXPECT_NO_THROW(block.set_slater({V2(0, 0), 0.3}));
  EXPECT_THROW(block.set_slater({V2(0, 0), 0.31}), ArgumentError);
  EXPECT_THROW(block.set_slater({V2(0, 0), 0.0}), ArgumentError);
}

TEST(BuiltinConstantsTest, LinearOnUnitBall) {
  const ConstraintBlock block(2, {LinearConstraint{V2(1, 0), 0.3}});
  const ConstraintConstants c =
      BuiltinConstants(block, Geometry::Euclidean(2), BaseSet::Ball(V2(0, 0), 1));
  EXPECT_DOUBLE_EQ(c.H(), 1.0);
  EXPECT_DOUBLE_EQ(c.gradient_lipschitz, 0.0);
  EXPECT_DOUBLE_EQ(c.G(), 1.3);
}

TEST(BuiltinConstantsTest, ZeroConstraint) {
  const ConstraintBlock block(2, {LinearConstraint{V2(0, 0), 0.0}});
  const ConstraintConstants c =
      BuiltinConstants(block, Geometry::Euclidean(2), BaseSet::Ball(V2(0, 0), 1));
  EXPECT_EQ(c.G(), 0.0);
  EXPECT_EQ(c.H(), 0.0);
  EXPECT_EQ(c.gradient_lipschitz, 0.0);
}

TEST(BuiltinConstantsTest, QuadraticSmoothnessIsTwo) {
  const double r = 0.7;
  const ConstraintBlock block(2, {QuadraticConstraint{V2(0, 0), r}});
  const BaseSet ball = BaseSet::Ball(V2(0, 0), r);
  const ConstraintConstants c =
      BuiltinConstants(block, Geometry::Euclidean(2), ball);
  EXPECT_DOUBLE_EQ(c.gradient_lipschitz, 2.0);

  // Jacobian Lipschitz ratio from finite-difference gradients.
  Rng rng(4);
  double worst = 0.0;
  for (const auto& [x, y] : SamplePairs(ball, 1000, rng)) {
    auto grad = [&](const Vector& p) {
      return FiniteDifference(
          [&](const Vector& q) { return block.Values(q)[0]; }, p);
    };
    worst = std::max(worst, (grad(x) - grad(y)).norm() / (x - y).norm());
  }
  EXPECT_NEAR(worst, 2.0, 1e-5);
}

TEST(BuiltinConstantsTest, CustomIsUnsupported) {
  CustomConstraint custom{[](const Vector& x) { return x.sum(); },
                          [](const Vector& x) { return Vector::Ones(x.size()); }};
  EXPECT_THROW(BuiltinConstants(ConstraintBlock(2, {custom}),
                                Geometry::Euclidean(2),
                                BaseSet::Ball(V2(0, 0), 1)),
               UnsupportedError);
}

struct ConstantsCase {
  const char* name;
  Geometry geom;
  BaseSet base;
  ConstraintBlock block;
};

std::vector<ConstantsCase> ConstantsCases() {
  const Vector a3{{1.0, -2.0, 0.5}};
  const Vector c3{{0.2, 0.1, -0.4}};
  std::vector<ConstantsCase> cases;
  cases.push_back({"ball", Geometry::Euclidean(3),
                   BaseSet::Ball(Vector{{0.5, 0.0, -1.0}}, 1.5),
                   ConstraintBlock(3, {LinearConstraint{a3, 0.7},
                                       QuadraticConstraint{c3, 0.6}})});
  cases.push_back({"box", Geometry::Euclidean(3),
                   BaseSet::Box(Vector{{-1.0, 0.0, 2.0}}, Vector{{1.0, 0.5, 3.0}}),
                   ConstraintBlock(3, {LinearConstraint{a3, -0.2},
                                       QuadraticConstraint{c3, 1.0}})});
  cases.push_back({"simplex", Geometry::Entropic(3), BaseSet::Simplex(3),
                   ConstraintBlock(3, {LinearConstraint{a3, 0.1},
                                       QuadraticConstraint{c3, 0.3}})});
  return cases;
}

TEST(BuiltinConstantsTest, ValidOnSampledPairs) {
  for (const ConstantsCase& tc : ConstantsCases()) {
    SCOPED_TRACE(tc.name);
    const ConstraintConstants c = BuiltinConstants(tc.block, tc.geom, tc.base);
    Rng rng(21);
    const double slack = 1.0 + 1e-9;
    for (const auto& [x, y] : SamplePairs(tc.base, 1000, rng)) {
      const ConstraintEval ex = tc.block.Eval(x);
      const ConstraintEval ey = tc.block.Eval(y);
      EXPECT_LE(ex.values.cwiseAbs().sum(), c.G() * slack);
      const double dist = tc.geom.PrimalNorm(x - y);
      for (int k = 0; k < tc.block.size(); ++k) {
        EXPECT_LE(std::abs(ex.values[k]) , c.per_bound[k] * slack);
        EXPECT_LE(std::abs(ex.values[k] - ey.values[k]),
                  c.per_lipschitz[k] * dist * slack + 1e-15);
        const Vector dg = (ex.jacobian.row(k) - ey.jacobian.row(k)).transpose();
        EXPECT_LE(tc.geom.DualNorm(dg),
                  c.gradient_lipschitz * dist * slack + 1e-15);
      }
    }
  }
}

TEST(DomainBoundTest, EuclideanBallDivergenceBounded) {
  // D(x, y) = |x - y|^2 / 2 <= (2r)^2 / 2 = R^2 on a ball of radius r.
  const double r = 1.5;
  const BaseSet ball = BaseSet::Ball(V2(1, -1), r);
  const double R2 = 2 * r * r;
  Rng rng(8);
  for (const auto& [x, y] : SamplePairs(ball, 1000, rng)) {
    EXPECT_LE(Bregman(Geometry::Euclidean(2), ball, x, y), R2 * (1 + 1e-9));
  }
}

std::vector<LossSequencePtr> AllFamilies(int T) {
  const Vector c{{-1.0, 0.5, 0.25}};
  const Vector u{{0.3, -0.2, 0.1}};
  return {MakeFixedLinear(c, T),
          MakeFixedQuadratic(Vector{{1.0, 1.0, 0.0}}, 1.5, T),
          MakeLinearDrift(c, u, T),
          MakeAlternating(c, Vector{{0.0, -1.5, 1.0}}, T),
          MakeQuadraticDrift(Vector{{1.0, 0.5, -0.5}}, Vector{{0.0, 0.5, 0.5}},
                             1.0, 0.5, T),
          MakeLinearJitter(c, 1.0, 0.25, T, 7)};
}

TEST(LossConstantsTest, ValidOnSampledPairs) {
  const int T = 20;
  const std::vector<std::pair<Geometry, BaseSet>> sets = {
      {Geometry::Euclidean(3), BaseSet::Ball(Vector{{0.0, 0.0, 0.0}}, 1.0)},
      {Geometry::Euclidean(3),
       BaseSet::Box(Vector{{-1.0, -1.0, -1.0}}, Vector{{1.0, 2.0, 0.5}})},
      {Geometry::Entropic(3), BaseSet::Simplex(3)}};
  for (const auto& seq : AllFamilies(T)) {
    SCOPED_TRACE(std::string(ToString(seq->family())));
    for (const auto& [geom, base] : sets) {
      const LossConstants c = seq->Constants(geom, base);
      Rng rng(31);
      for (const auto& [x, y] : SamplePairs(base, 1000, rng)) {
        const int t = 1 + static_cast<int>(rng() % T);
        const Vector gx = seq->Gradient(t, x);
        EXPECT_LE(geom.DualNorm(gx), c.gradient_bound * (1 + 1e-9));
        EXPECT_LE(geom.DualNorm(gx - seq->Gradient(t, y)),
                  c.gradient_lipschitz * geom.PrimalNorm(x - y) * (1 + 1e-9) +
                      1e-15);
      }
    }
  }
}

TEST(LossSequenceTest, GradientsMatchFiniteDifferences) {
  for (const auto& seq : AllFamilies(10)) {
    SCOPED_TRACE(std::string(ToString(seq->family())));
    const Vector x{{0.2, -0.3, 0.4}};
    for (int t : {1, 5, 10}) {
      const Vector fd = FiniteDifference(
          [&](const Vector& y) { return seq->Value(t, y); }, x);
      EXPECT_LE((fd - seq->Gradient(t, x)).norm(), 1e-7);
    }
  }
}

TEST(LossSequenceTest, RoundZeroCopiesRoundOne) {
  for (const auto& seq : AllFamilies(10)) {
    const Vector x{{0.2, -0.3, 0.4}};
    EXPECT_EQ(seq->Value(0, x), seq->Value(1, x));
    EXPECT_EQ(seq->Gradient(0, x), seq->Gradient(1, x));
    EXPECT_THROW(seq->Value(11, x), ArgumentError);
    EXPECT_THROW(seq->Value(-1, x), ArgumentError);
  }
}

TEST(LossSequenceTest, JitterIsSeedDeterministic) {
  const Vector c{{-1.0, 0.5}};
  const auto a = MakeLinearJitter(c, 1.0, 0.25, 50, 3);
  const auto b = MakeLinearJitter(c, 1.0, 0.25, 50, 3);
  const auto other = MakeLinearJitter(c, 1.0, 0.25, 50, 4);
  const Vector x{{0.1, 0.2}};
  for (int t = 1; t <= 50; ++t) EXPECT_EQ(a->Gradient(t, x), b->Gradient(t, x));
  EXPECT_NE(a->Gradient(7, x), other->Gradient(7, x));
}

// Brute force: max over sampled x of |grad f^t(x) - grad f^{t-1}(x)|_*^2.
double SampledVariation(const LossSequence& seq, const Geometry& geom,
                        const BaseSet& base, int samples) {
  Rng rng(77);
  const auto points = SamplePoints(base, samples, rng);
  double total = 0.0;
  for (int t = 2; t <= seq.horizon(); ++t) {
    double best = 0.0;
    for (const Vector& x : points) {
      best = std::max(best, std::pow(geom.DualNorm(seq.Gradient(t, x) -
                                                   seq.Gradient(t - 1, x)),
                                     2));
    }
    total += best;
  }
  return total;
}

TEST(GradientVariationTest, FixedIsZero) {
  const Geometry geom = Geometry::Euclidean(2);
  const BaseSet ball = BaseSet::Ball(V2(0, 0), 1);
  EXPECT_EQ(MakeFixedLinear(V2(1, 2), 100)->GradientVariation(geom, ball), 0.0);
  EXPECT_EQ(MakeFixedQuadratic(V2(1, 2), 3.0, 100)->GradientVariation(geom, ball),
            0.0);
}

TEST(GradientVariationTest, AlternatingLinear) {
  const Geometry geom = Geometry::Euclidean(2);
  const BaseSet ball = BaseSet::Ball(V2(0, 0), 1);
  const Vector c = V2(-2, 0.5), c_alt = V2(0, -1.5);
  const auto seq = MakeAlternating(c, c_alt, 10);
  const double expected = 9 * (c - c_alt).squaredNorm();
  EXPECT_NEAR(seq->GradientVariation(geom, ball), expected, 1e-12);
  EXPECT_NEAR(SampledVariation(*seq, geom, ball, 50), expected, 1e-12);
}

TEST(GradientVariationTest, LinearDrift) {
  const Geometry geom = Geometry::Euclidean(2);
  const BaseSet ball = BaseSet::Ball(V2(0, 0), 1);
  const Vector u = V2(0.6, -0.8);
  const int T = 40;
  const auto seq = MakeLinearDrift(V2(1, 1), u, T);
  const double expected = (T - 1) * (u / T).squaredNorm();
  EXPECT_NEAR(seq->GradientVariation(geom, ball), expected, 1e-14);
  EXPECT_NEAR(SampledVariation(*seq, geom, ball, 20), expected, 1e-14);
}

TEST(GradientVariationTest, QuadraticDriftIsOverestimate) {
  const Geometry geom = Geometry::Euclidean(2);
  const BaseSet ball = BaseSet::Ball(V2(0.5, 0), 1);
  const auto seq =
      MakeQuadraticDrift(V2(1, 0.5), V2(-1, 0.5), 1.0, 2.0, 30);
  const double bound = seq->GradientVariation(geom, ball);
  const double sampled = SampledVariation(*seq, geom, ball, 2000);
  EXPECT_GT(sampled, 0.0);
  EXPECT_LE(sampled, bound * (1 + 1e-12));
}

TEST(GradientVariationTest, AdditiveOverConcatenation) {
  // Two alternating blocks joined at a boundary contribute their own
  // variations plus the single junction term.
  const Geometry geom = Geometry::Euclidean(2);
  const BaseSet ball = BaseSet::Ball(V2(0, 0), 1);
  std::vector<DiagonalQuadratic> first, second, joined;
  for (int t = 1; t <= 6; ++t) {
    first.push_back({Vector::Zero(2), V2(t % 2, 0.5 * t), 0.0});
    second.push_back({Vector::Zero(2), V2(-t, 1.0 / t), 0.0});
  }
  joined = first;
  joined.insert(joined.end(), second.begin(), second.end());
  const DiagonalQuadraticSequence a(LossFamily::kCustom, 6, first);
  const DiagonalQuadraticSequence b(LossFamily::kCustom, 6, second);
  const DiagonalQuadraticSequence ab(LossFamily::kCustom, 12, joined);
  const double junction = (second.front().linear - first.back().linear).squaredNorm();
  const double va = a.GradientVariation(geom, ball);
  const double vb = b.GradientVariation(geom, ball);
  EXPECT_GE(va, 0.0);
  EXPECT_GE(vb, 0.0);
  EXPECT_NEAR(ab.GradientVariation(geom, ball), va + vb + junction, 1e-12);
}

TEST(GradientVariationTest, CustomWithoutBoundIsUnsupported) {
  CustomLossSequence seq(
      2, 5, [](int, const Vector& x) { return x.sum(); },
      [](int, const Vector& x) { return Vector::Ones(x.size()); }, {1.0, 0.0});
  EXPECT_THROW(seq.GradientVariation(Geometry::Euclidean(2),
                                     BaseSet::Ball(V2(0, 0), 1)),
               UnsupportedError);
}

TEST(MakeProblemTest, DerivesConstantsAndAppliesOverrides) {
  const Geometry geom = Geometry::Euclidean(2);
  const BaseSet ball = BaseSet::Ball(V2(0, 0), 1);
  const ConstraintBlock block(2, {LinearConstraint{V2(1, 0), 0.3}});
  const Problem p = MakeProblem(geom, ball, block, MakeFixedLinear(V2(-1, 0), 3));
  EXPECT_DOUBLE_EQ(p.constants.constraint_bound, 1.3);
  EXPECT_DOUBLE_EQ(p.constants.constraint_lipschitz, 1.0);
  EXPECT_DOUBLE_EQ(p.constants.constraint_smoothness, 0.0);
  EXPECT_DOUBLE_EQ(p.constants.loss_gradient_bound, 1.0);
  EXPECT_DOUBLE_EQ(p.constants.loss_smoothness, kDefaultLossSmoothness);

  ConstantOverrides o;
  o.loss_smoothness = 2.0;
  o.constraint_bound = 5.0;
  const Problem q =
      MakeProblem(geom, ball, block, MakeFixedLinear(V2(-1, 0), 3), o);
  EXPECT_EQ(q.constants.loss_smoothness, 2.0);
  EXPECT_EQ(q.constants.constraint_bound, 5.0);
}

TEST(MakeProblemTest, CustomConstraintsNeedOverrides) {
  const Geometry geom = Geometry::Euclidean(2);
  const BaseSet ball = BaseSet::Ball(V2(0, 0), 1);
  CustomConstraint custom{[](const Vector& x) { return x.sum(); },
                          [](const Vector& x) { return Vector::Ones(x.size()); }};
  const ConstraintBlock block(2, {custom});
  EXPECT_THROW(MakeProblem(geom, ball, block, MakeFixedLinear(V2(-1, 0), 3)),
               UnsupportedError);
  ConstantOverrides o;
  o.constraint_bound = 2 * std::sqrt(2.0);
  o.constraint_lipschitz = std::sqrt(2.0);
  o.constraint_smoothness = 0.0;
  EXPECT_NO_THROW(
      MakeProblem(geom, ball, block, MakeFixedLinear(V2(-1, 0), 3), o));
}

TEST(MakeProblemTest, RejectsMismatches) {
  EXPECT_THROW(MakeProblem(Geometry::Euclidean(2), BaseSet::Ball(V2(0, 0), 1),
                           ConstraintBlock::Empty(2),
                           MakeFixedLinear(Vector::Ones(3), 3)),
               ArgumentError);
  EXPECT_THROW(MakeProblem(Geometry::Entropic(2), BaseSet::Ball(V2(0, 0), 1),
                           ConstraintBlock::Empty(2),
                           MakeFixedLinear(Vector::Ones(2), 3)),
               ArgumentError);
}

}  // namespace
}  // namespace opmp
