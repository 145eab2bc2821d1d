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

#include "opmp/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include <fmt/format.h>

#include "opmp/errors.hpp"

namespace opmp {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// [min, max] of <a, x> over the base set.
std::pair<double, double> LinearRange(const Vector& a, const BaseSet& base) {
  switch (base.kind()) {
    case BaseSetKind::kBall: {
      const double mid = a.dot(base.ball_center());
      const double spread = base.ball_radius() * a.norm();
      return {mid - spread, mid + spread};
    }
    case BaseSetKind::kBox: {
      const Vector at_lower = a.cwiseProduct(base.box_lower());
      const Vector at_upper = a.cwiseProduct(base.box_upper());
      return {at_lower.cwiseMin(at_upper).sum(),
              at_lower.cwiseMax(at_upper).sum()};
    }
    case BaseSetKind::kSimplex:
      return {a.minCoeff(), a.maxCoeff()};
  }
  return {0.0, 0.0};
}

// [inf, sup] of |x - p|_2^2 over the base set.
std::pair<double, double> SquaredDistanceRange(const Vector& p,
                                               const BaseSet& base) {
  switch (base.kind()) {
    case BaseSetKind::kBall: {
      const double gap = (base.ball_center() - p).norm();
      const double near = std::max(0.0, gap - base.ball_radius());
      const double far = gap + base.ball_radius();
      return {near * near, far * far};
    }
    case BaseSetKind::kBox: {
      const Vector clamped =
          p.cwiseMax(base.box_lower()).cwiseMin(base.box_upper());
      const Vector far = (base.box_lower() - p)
                             .cwiseAbs()
                             .cwiseMax((base.box_upper() - p).cwiseAbs());
      return {(clamped - p).squaredNorm(), far.squaredNorm()};
    }
    case BaseSetKind::kSimplex: {
      const double near = (Project(base, p) - p).squaredNorm();
      // Convex in x, so the sup is attained at a vertex e_i.
      const double far = p.squaredNorm() + 1.0 - 2.0 * p.minCoeff();
      return {near, far};
    }
  }
  return {0.0, 0.0};
}

// sup over the base set of |x - p| in the given norm.
double FarthestDistance(const Vector& p, const BaseSet& base, NormKind norm) {
  switch (base.kind()) {
    case BaseSetKind::kBall: {
      const Vector offset = base.ball_center() - p;
      const double r = base.ball_radius();
      if (norm == NormKind::kL2) return offset.norm() + r;
      if (norm == NormKind::kLinf) return Norm(norm, offset) + r;
      return offset.lpNorm<1>() + r * std::sqrt(static_cast<double>(p.size()));
    }
    case BaseSetKind::kBox: {
      const Vector far = (base.box_lower() - p)
                             .cwiseAbs()
                             .cwiseMax((base.box_upper() - p).cwiseAbs());
      return Norm(norm, far);
    }
    case BaseSetKind::kSimplex: {
      // Convex in x: the sup sits at a vertex.
      double best = 0.0;
      for (Eigen::Index i = 0; i < p.size(); ++i) {
        Vector vertex = Vector::Zero(p.size());
        vertex[i] = 1.0;
        best = std::max(best, Norm(norm, vertex - p));
      }
      return best;
    }
  }
  return 0.0;
}

void RequireFinite(const Vector& v, const char* oracle) {
  if (!v.allFinite()) {
    throw DataError(fmt::format("constraint oracle '{}' returned non-finite "
                                "values",
                                oracle));
  }
}

}  // namespace

ConstraintBlock::ConstraintBlock(int dim, std::vector<ConstraintTerm> terms)
    : dim_(dim), terms_(std::move(terms)) {
  if (dim <= 0) throw ArgumentError("constraint dimension must be positive");
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    std::visit(Overloaded{
                   [&](const LinearConstraint& c) {
                     if (c.a.size() != dim) {
                       throw ArgumentError(fmt::format(
                           "constraint {}: coefficient dimension {} != {}", k,
                           c.a.size(), dim));
                     }
                   },
                   [&](const QuadraticConstraint& c) {
                     if (c.center.size() != dim) {
                       throw ArgumentError(fmt::format(
                           "constraint {}: center dimension {} != {}", k,
                           c.center.size(), dim));
                     }
                   },
                   [&](const CustomConstraint& c) {
                     if (!c.value || !c.gradient) {
                       throw ArgumentError(fmt::format(
                           "constraint {}: custom oracle is empty", k));
                     }
                   },
               },
               terms_[k]);
  }
}

bool ConstraintBlock::IsBuiltin() const {
  return std::none_of(terms_.begin(), terms_.end(), [](const auto& term) {
    return std::holds_alternative<CustomConstraint>(term);
  });
}

ConstraintEval ConstraintBlock::Eval(const Vector& x) const {
  if (x.size() != dim_) {
    throw ArgumentError(fmt::format("constraint eval: dimension {} != {}",
                                    x.size(), dim_));
  }
  ConstraintEval out{Vector(size()), Matrix(size(), dim_)};
  for (int k = 0; k < size(); ++k) {
    std::visit(Overloaded{
                   [&](const LinearConstraint& c) {
                     out.values[k] = c.a.dot(x) - c.b;
                     out.jacobian.row(k) = c.a.transpose();
                   },
                   [&](const QuadraticConstraint& c) {
                     const Vector offset = x - c.center;
                     out.values[k] =
                         offset.squaredNorm() - c.radius * c.radius;
                     out.jacobian.row(k) = 2.0 * offset.transpose();
                   },
                   [&](const CustomConstraint& c) {
                     out.values[k] = c.value(x);
                     const Vector grad = c.gradient(x);
                     if (grad.size() != dim_) {
                       throw DataError("custom constraint gradient has the "
                                       "wrong dimension");
                     }
                     out.jacobian.row(k) = grad.transpose();
                   },
               },
               terms_[k]);
  }
  RequireFinite(out.values, "value");
  if (!out.jacobian.allFinite()) {
    throw DataError("constraint oracle 'gradient' returned non-finite values");
  }
  return out;
}

Vector ConstraintBlock::Values(const Vector& x) const { return Eval(x).values; }

void ConstraintBlock::set_slater(SlaterCertificate certificate) {
  if (!(certificate.margin > 0.0)) {
    throw ArgumentError("slater margin must be positive");
  }
  const Vector g = Values(certificate.point);
  for (int k = 0; k < size(); ++k) {
    if (g[k] > -certificate.margin) {
      throw ArgumentError(fmt::format(
          "slater certificate fails for constraint {}: g = {} > -{}", k, g[k],
          certificate.margin));
    }
  }
  slater_ = std::move(certificate);
}

ConstraintConstants BuiltinConstants(const ConstraintBlock& block,
                                     const Geometry& geom,
                                     const BaseSet& base) {
  CheckCompatible(geom, base);
  if (block.dim() != base.dim()) {
    throw ArgumentError("constraint block dimension does not match base set");
  }
  const int K = block.size();
  ConstraintConstants out{Vector::Zero(K), Vector::Zero(K), 0.0};
  for (int k = 0; k < K; ++k) {
    std::visit(
        Overloaded{
            [&](const LinearConstraint& c) {
              const auto [lo, hi] = LinearRange(c.a, base);
              out.per_bound[k] = std::max(std::abs(hi - c.b), std::abs(lo - c.b));
              out.per_lipschitz[k] = geom.DualNorm(c.a);
            },
            [&](const QuadraticConstraint& c) {
              const double r2 = c.radius * c.radius;
              const auto [lo, hi] = SquaredDistanceRange(c.center, base);
              out.per_bound[k] = std::max(std::abs(hi - r2), std::abs(lo - r2));
              out.per_lipschitz[k] =
                  2.0 * FarthestDistance(c.center, base, geom.dual_norm());
              // |2(x - y)|_* <= 2 |x - y| for both (l2, l2) and (l1, linf).
              out.gradient_lipschitz = std::max(out.gradient_lipschitz, 2.0);
            },
            [&](const CustomConstraint&) {
              throw UnsupportedError(fmt::format(
                  "constraint {} is custom; its constants must be supplied",
                  k));
            },
        },
        block.terms()[k]);
  }
  return out;
}

}  // namespace opmp
