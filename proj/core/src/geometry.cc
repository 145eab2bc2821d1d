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

#include "opmp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include <fmt/format.h>

#include "opmp/errors.hpp"

namespace opmp {

namespace {

void RequireDim(const Vector& v, int dim, const char* what) {
  if (v.size() != dim) {
    throw ArgumentError(fmt::format("{}: expected dimension {}, got {}", what,
                                    dim, v.size()));
  }
}

void RequireFinite(const Vector& v, const char* what) {
  if (!v.allFinite()) {
    throw ArgumentError(fmt::format("{}: non-finite entries", what));
  }
}

// Sort-and-threshold projection onto {x >= 0, sum x = 1}.
Vector ProjectSimplex(const Vector& y) {
  const auto d = y.size();
  std::vector<double> u(y.data(), y.data() + d);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (Eigen::Index j = 0; j < d; ++j) {
    cumulative += u[j];
    const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (u[j] - candidate > 0.0) theta = candidate;
  }
  return (y.array() - theta).max(0.0).matrix();
}

Vector EntropicStep(const Vector& anchor, const Vector& h, double alpha) {
  const auto d = anchor.size();
  Vector logits(d);
  double max_logit = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < d; ++i) {
    if (anchor[i] < 0.0) {
      throw DomainError("entropic mirror step: anchor has negative entries");
    }
    logits[i] = anchor[i] > 0.0
                    ? std::log(anchor[i]) - h[i] / alpha
                    : -std::numeric_limits<double>::infinity();
    max_logit = std::max(max_logit, logits[i]);
  }
  if (!std::isfinite(max_logit)) {
    throw DomainError("entropic mirror step: anchor has no positive entry");
  }
  Vector x(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    if (anchor[i] > 0.0) {
      // Floor keeps the iterate in the relative interior after underflow.
      x[i] = std::max(std::exp(logits[i] - max_logit),
                      std::numeric_limits<double>::min());
    } else {
      x[i] = 0.0;
    }
  }
  return x / x.sum();
}

}  // namespace

double Norm(NormKind kind, const Vector& v) {
  switch (kind) {
    case NormKind::kL1:
      return v.lpNorm<1>();
    case NormKind::kL2:
      return v.norm();
    case NormKind::kLinf:
      return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>();
  }
  return 0.0;
}

std::string_view ToString(GeometryKind kind) {
  return kind == GeometryKind::kEuclidean ? "euclidean" : "entropic";
}

std::string_view ToString(BaseSetKind kind) {
  switch (kind) {
    case BaseSetKind::kBall:
      return "ball";
    case BaseSetKind::kBox:
      return "box";
    case BaseSetKind::kSimplex:
      return "simplex";
  }
  return "?";
}

Geometry::Geometry(GeometryKind kind, int dim) : kind_(kind), dim_(dim) {
  if (dim <= 0) throw ArgumentError("geometry dimension must be positive");
}

Geometry Geometry::Euclidean(int dim) {
  return Geometry(GeometryKind::kEuclidean, dim);
}

Geometry Geometry::Entropic(int dim) {
  return Geometry(GeometryKind::kEntropic, dim);
}

NormKind Geometry::norm() const {
  return kind_ == GeometryKind::kEuclidean ? NormKind::kL2 : NormKind::kL1;
}

NormKind Geometry::dual_norm() const {
  return kind_ == GeometryKind::kEuclidean ? NormKind::kL2 : NormKind::kLinf;
}

BaseSet::BaseSet(BaseSetKind kind, int dim) : kind_(kind), dim_(dim) {
  if (dim <= 0) throw ArgumentError("base set dimension must be positive");
}

BaseSet BaseSet::Ball(Vector center, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw ArgumentError("ball radius must be positive and finite");
  }
  RequireFinite(center, "ball center");
  BaseSet set(BaseSetKind::kBall, static_cast<int>(center.size()));
  set.center_ = std::move(center);
  set.radius_ = radius;
  return set;
}

BaseSet BaseSet::Box(Vector lower, Vector upper) {
  if (lower.size() != upper.size()) {
    throw ArgumentError("box bounds have different dimensions");
  }
  RequireFinite(lower, "box lower");
  RequireFinite(upper, "box upper");
  if ((lower.array() > upper.array()).any()) {
    throw ArgumentError("box lower bound exceeds upper bound");
  }
  BaseSet set(BaseSetKind::kBox, static_cast<int>(lower.size()));
  set.lower_ = std::move(lower);
  set.upper_ = std::move(upper);
  return set;
}

BaseSet BaseSet::Simplex(int dim) { return BaseSet(BaseSetKind::kSimplex, dim); }

Vector BaseSet::Center() const {
  switch (kind_) {
    case BaseSetKind::kBall:
      return center_;
    case BaseSetKind::kBox:
      return 0.5 * (lower_ + upper_);
    case BaseSetKind::kSimplex:
      return Vector::Constant(dim_, 1.0 / dim_);
  }
  return {};
}

bool BaseSet::Contains(const Vector& x, double tol) const {
  if (x.size() != dim_ || !x.allFinite()) return false;
  switch (kind_) {
    case BaseSetKind::kBall:
      return (x - center_).norm() <= radius_ * (1.0 + tol) + tol;
    case BaseSetKind::kBox:
      return (x.array() >= lower_.array() - tol).all() &&
             (x.array() <= upper_.array() + tol).all();
    case BaseSetKind::kSimplex:
      return (x.array() >= -tol).all() && std::abs(x.sum() - 1.0) <= tol;
  }
  return false;
}

double BaseSet::RadiusAroundCenter(NormKind norm) const {
  const double d = dim_;
  switch (kind_) {
    case BaseSetKind::kBall:
      return norm == NormKind::kL1 ? radius_ * std::sqrt(d) : radius_;
    case BaseSetKind::kBox: {
      const Vector half = 0.5 * (upper_ - lower_);
      return Norm(norm, half);
    }
    case BaseSetKind::kSimplex:
      switch (norm) {
        case NormKind::kL1:
          return 2.0 * (1.0 - 1.0 / d);
        case NormKind::kL2:
          return std::sqrt(1.0 - 1.0 / d);
        case NormKind::kLinf:
          return 1.0 - 1.0 / d;
      }
  }
  return 0.0;
}

void CheckCompatible(const Geometry& geom, const BaseSet& base) {
  if (geom.dim() != base.dim()) {
    throw ArgumentError(fmt::format(
        "geometry dimension {} does not match base set dimension {}",
        geom.dim(), base.dim()));
  }
  const bool simplex = base.kind() == BaseSetKind::kSimplex;
  if (geom.kind() == GeometryKind::kEntropic && !simplex) {
    throw ArgumentError("entropic geometry requires the simplex base set");
  }
  if (geom.kind() == GeometryKind::kEuclidean && simplex) {
    throw ArgumentError("euclidean geometry is paired with ball or box sets");
  }
}

double Bregman(const Geometry& geom, const BaseSet& base, const Vector& x,
               const Vector& y) {
  RequireDim(x, base.dim(), "bregman x");
  RequireDim(y, base.dim(), "bregman y");
  if (geom.dim() != base.dim()) {
    throw ArgumentError("bregman: geometry/base dimension mismatch");
  }
  if (geom.kind() == GeometryKind::kEuclidean) {
    return 0.5 * (x - y).squaredNorm();
  }
  double total = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] < 0.0 || y[i] < 0.0) {
      throw DomainError("KL divergence of a vector with negative entries");
    }
    if (x[i] == 0.0) continue;
    if (y[i] == 0.0) {
      throw DomainError(
          fmt::format("KL divergence is infinite: y[{}] = 0 < x[{}]", i, i));
    }
    total += x[i] * (std::log(x[i]) - std::log(y[i]));
  }
  // Rounding can leave a tiny negative value at x == y.
  return std::max(total, 0.0);
}

Vector Project(const BaseSet& base, const Vector& y) {
  RequireDim(y, base.dim(), "project");
  RequireFinite(y, "project");
  switch (base.kind()) {
    case BaseSetKind::kBall: {
      const Vector offset = y - base.ball_center();
      const double n = offset.norm();
      if (n <= base.ball_radius()) return y;
      return base.ball_center() + offset * (base.ball_radius() / n);
    }
    case BaseSetKind::kBox:
      return y.cwiseMax(base.box_lower()).cwiseMin(base.box_upper());
    case BaseSetKind::kSimplex:
      return ProjectSimplex(y);
  }
  return y;
}

Vector MirrorStep(const Geometry& geom, const BaseSet& base,
                  const Vector& anchor, const Vector& h, double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw ArgumentError(fmt::format("mirror step weight must be positive, got {}",
                                    alpha));
  }
  RequireDim(anchor, base.dim(), "mirror step anchor");
  RequireDim(h, base.dim(), "mirror step direction");
  RequireFinite(h, "mirror step direction");
  if (geom.kind() == GeometryKind::kEuclidean) {
    return Project(base, anchor - h / alpha);
  }
  if (base.kind() != BaseSetKind::kSimplex) {
    throw ArgumentError("entropic mirror step requires the simplex");
  }
  return EntropicStep(anchor, h, alpha);
}

MirrorStepFn DefaultMirrorStep(const Geometry& geom, const BaseSet& base) {
  return [geom, base](const Vector& anchor, const Vector& h, double alpha) {
    return MirrorStep(geom, base, anchor, h, alpha);
  };
}

}  // namespace opmp
