// Copyright 2026 The bregvr Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Mirror maps, Bregman distances and closed-form Bregman proximity operators.
//
// Two Legendre functions are supported:
//   Euclidean        phi(x) = 0.5 |x|_2^2          paired with |.|_2
//   NegativeEntropy  phi(x) = sum_i x_i log x_i    paired with |.|_1
// Both are 1-strongly convex with respect to their paired norm (for the
// entropy this holds on the probability simplex by Pinsker's inequality).

#ifndef BREGVR_GEOMETRY_H_
#define BREGVR_GEOMETRY_H_

#include <string>
#include <string_view>

#include "bregvr/types.h"

namespace bregvr {

enum class GeometryKind { kEuclidean, kNegativeEntropy };

std::string_view to_string(GeometryKind kind);
GeometryKind geometry_kind_from_string(std::string_view name);

class LegendreGeometry {
 public:
  static constexpr double kDefaultDomainFloor = 1e-300;

  LegendreGeometry(GeometryKind kind, Eigen::Index dim,
                   double domain_floor = kDefaultDomainFloor);

  GeometryKind kind() const { return kind_; }
  Eigen::Index dim() const { return dim_; }
  double domain_floor() const { return domain_floor_; }

  bool in_interior(const Vector& x) const;
  // Throws DomainError unless x is in the interior domain.
  void check_interior(const Vector& x) const;

  // phi(x). Accepts the closed domain (0 log 0 = 0) for the entropy.
  double value(const Vector& x) const;

  Vector grad(const Vector& x) const;
  Vector grad_conjugate(const Vector& w) const;

  // D(x, y) = phi(x) - phi(y) - <x - y, grad phi(y)>.
  double bregman_distance(const Vector& x, const Vector& y) const;

  // Paired primal norm and its dual.
  double norm(const Vector& x) const;
  double dual_norm(const Vector& g) const;

 private:
  void check_dim(const Vector& x) const;

  GeometryKind kind_;
  Eigen::Index dim_;
  double domain_floor_;
};

enum class SimpleKind {
  kZero,
  kSimplexIndicator,
  kBoxIndicator,  // indicator of [-1, 1]^dim
  kL1Norm,        // weight * |x|_1
  kScaledGeometry,  // weight * phi(x)
};

std::string_view to_string(SimpleKind kind);
SimpleKind simple_kind_from_string(std::string_view name);

// The nonsmooth term f (primal) or g* (dual).
struct SimpleFunction {
  SimpleKind kind = SimpleKind::kZero;
  double weight = 0.0;

  static SimpleFunction zero() { return {}; }
  static SimpleFunction simplex() { return {SimpleKind::kSimplexIndicator, 0.0}; }
  static SimpleFunction box() { return {SimpleKind::kBoxIndicator, 0.0}; }
  static SimpleFunction l1(double weight);
  static SimpleFunction scaled_geometry(double weight);

  bool is_indicator() const {
    return kind == SimpleKind::kSimplexIndicator ||
           kind == SimpleKind::kBoxIndicator;
  }

  // Strong convexity relative to the attached mirror map.
  double relative_strong_convexity() const {
    return kind == SimpleKind::kScaledGeometry ? weight : 0.0;
  }

  // Extended-real value; indicators return +inf outside their set.
  double evaluate(const LegendreGeometry& geom, const Vector& x) const;

  // Membership in dom(fn), with a small feasibility tolerance for indicators.
  bool feasible(const Vector& x) const;
};

// Feasibility tolerances applied by SimpleFunction::evaluate.
inline constexpr double kSimplexSumTolerance = 1e-9;
inline constexpr double kBoxTolerance = 1e-12;

// Solves grad phi(p) + step * d fn(p) ∋ w for p, using the closed form
// registered for (geom.kind(), fn.kind). Throws UnsupportedPair otherwise.
Vector mirror_prox(const LegendreGeometry& geom, const SimpleFunction& fn,
                   double step, const Vector& w);

// Euclidean projection onto the probability simplex.
Vector project_simplex(const Vector& w);

Vector soft_threshold(const Vector& w, double threshold);

}  // namespace bregvr

#endif  // BREGVR_GEOMETRY_H_
