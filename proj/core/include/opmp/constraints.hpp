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
#include <optional>
#include <variant>
#include <vector>

#include "opmp/geometry.hpp"

namespace opmp {

// g(x) = <a, x> - b
struct LinearConstraint {
  Vector a;
  double b = 0.0;
};

// g(x) = |x - center|_2^2 - radius^2
struct QuadraticConstraint {
  Vector center;
  double radius = 0.0;
};

// User-supplied oracle; constants must be provided by the caller.
struct CustomConstraint {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
};

using ConstraintTerm =
    std::variant<LinearConstraint, QuadraticConstraint, CustomConstraint>;

struct ConstraintEval {
  Vector values;    // g_k(x)
  Matrix jacobian;  // row k is grad g_k(x)
};

/// Boundedness and smoothness constants of a constraint block, measured in
/// the geometry's norm pair.
///
/// per_bound[k] bounds sup |g_k| over the base set and per_lipschitz[k] is the
/// Lipschitz constant of g_k. The aggregate G and H are their sums.
struct ConstraintConstants {
  Vector per_bound;
  Vector per_lipschitz;
  double gradient_lipschitz = 0.0;  // L_g

  double G() const { return per_bound.sum(); }
  double H() const { return per_lipschitz.sum(); }
};

struct SlaterCertificate {
  Vector point;
  double margin = 0.0;  // g_k(point) <= -margin for every k
};

class ConstraintBlock {
 public:
  ConstraintBlock() = default;
  ConstraintBlock(int dim, std::vector<ConstraintTerm> terms);

  static ConstraintBlock Empty(int dim) { return ConstraintBlock(dim, {}); }

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(terms_.size()); }
  const std::vector<ConstraintTerm>& terms() const { return terms_; }
  bool IsBuiltin() const;

  ConstraintEval Eval(const Vector& x) const;
  Vector Values(const Vector& x) const;

  const std::optional<SlaterCertificate>& slater() const { return slater_; }
  // Throws ArgumentError unless every g_k(point) <= -margin < 0.
  void set_slater(SlaterCertificate certificate);

 private:
  int dim_ = 0;
  std::vector<ConstraintTerm> terms_;
  std::optional<SlaterCertificate> slater_;
};

/// Closed-form valid constants for linear and quadratic constraint terms.
/// Throws UnsupportedError for custom terms.
ConstraintConstants BuiltinConstants(const ConstraintBlock& block,
                                     const Geometry& geom,
                                     const BaseSet& base);

}  // namespace opmp
