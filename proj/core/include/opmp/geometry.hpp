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

#include <functional>
#include <string_view>

#include <Eigen/Core>

namespace opmp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class NormKind { kL1, kL2, kLinf };

double Norm(NormKind kind, const Vector& v);

enum class GeometryKind { kEuclidean, kEntropic };

std::string_view ToString(GeometryKind kind);

/// A distance generating function together with the norm it is strongly
/// convex in.
///
/// Euclidean: omega(x) = |x|_2^2 / 2, modulus 1 w.r.t. l2 (dual l2).
/// Entropic:  omega(x) = sum_i x_i log x_i, modulus 1 w.r.t. l1 (dual linf).
class Geometry {
 public:
  static Geometry Euclidean(int dim);
  static Geometry Entropic(int dim);

  GeometryKind kind() const { return kind_; }
  int dim() const { return dim_; }
  double modulus() const { return 1.0; }
  NormKind norm() const;
  NormKind dual_norm() const;

  double PrimalNorm(const Vector& v) const { return Norm(norm(), v); }
  double DualNorm(const Vector& v) const { return Norm(dual_norm(), v); }

  bool operator==(const Geometry&) const = default;

 private:
  Geometry(GeometryKind kind, int dim);

  GeometryKind kind_;
  int dim_;
};

enum class BaseSetKind { kBall, kBox, kSimplex };

std::string_view ToString(BaseSetKind kind);

/// The compact convex set every decision lives in.
class BaseSet {
 public:
  static BaseSet Ball(Vector center, double radius);
  static BaseSet Box(Vector lower, Vector upper);
  static BaseSet Simplex(int dim);

  BaseSetKind kind() const { return kind_; }
  int dim() const { return dim_; }

  // Ball center, box midpoint, or the uniform distribution.
  Vector Center() const;

  const Vector& ball_center() const { return center_; }
  double ball_radius() const { return radius_; }
  const Vector& box_lower() const { return lower_; }
  const Vector& box_upper() const { return upper_; }

  bool Contains(const Vector& x, double tol = 1e-12) const;

  // sup_{x in set} |x - Center()| in the given norm.
  double RadiusAroundCenter(NormKind norm) const;

 private:
  BaseSet(BaseSetKind kind, int dim);

  BaseSetKind kind_;
  int dim_;
  Vector center_;
  double radius_ = 0.0;
  Vector lower_;
  Vector upper_;
};

// Entropic geometry pairs only with the simplex; Euclidean with ball/box.
void CheckCompatible(const Geometry& geom, const BaseSet& base);

/// D(x, y) = omega(x) - omega(y) - <grad omega(y), x - y>.
///
/// The entropic case uses 0 log 0 = 0 and throws DomainError when some
/// y_i = 0 while x_i > 0 (the divergence would be infinite).
double Bregman(const Geometry& geom, const BaseSet& base, const Vector& x,
               const Vector& y);

/// Euclidean projection onto the base set. Idempotent and non-expansive.
Vector Project(const BaseSet& base, const Vector& y);

/// argmin_{x in base} <h, x> + alpha * D(x, anchor).
///
/// Euclidean: Project(anchor - h / alpha). Entropic: x_i proportional to
/// anchor_i * exp(-h_i / alpha), evaluated in log space.
Vector MirrorStep(const Geometry& geom, const BaseSet& base,
                  const Vector& anchor, const Vector& h, double alpha);

// Extension point for base sets without a built-in closed form: any callable
// returning argmin_x <h, x> + alpha * D(x, anchor).
using MirrorStepFn =
    std::function<Vector(const Vector& anchor, const Vector& h, double alpha)>;

MirrorStepFn DefaultMirrorStep(const Geometry& geom, const BaseSet& base);

}  // namespace opmp
