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

#include "bregvr/geometry.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "bregvr/errors.h"

namespace bregvr {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// exp(700) is close to the largest finite double.
constexpr double kMaxExponent = 700.0;

std::string pair_name(GeometryKind g, SimpleKind f) {
  return std::string(to_string(g)) + "/" + std::string(to_string(f));
}

}  // namespace

std::string_view to_string(GeometryKind kind) {
  switch (kind) {
    case GeometryKind::kEuclidean:
      return "euclidean";
    case GeometryKind::kNegativeEntropy:
      return "entropy";
  }
  return "unknown";
}

GeometryKind geometry_kind_from_string(std::string_view name) {
  if (name == "euclidean") return GeometryKind::kEuclidean;
  if (name == "entropy" || name == "negative_entropy")
    return GeometryKind::kNegativeEntropy;
  throw ConfigError("unknown geometry '" + std::string(name) + "'");
}

std::string_view to_string(SimpleKind kind) {
  switch (kind) {
    case SimpleKind::kZero:
      return "zero";
    case SimpleKind::kSimplexIndicator:
      return "simplex";
    case SimpleKind::kBoxIndicator:
      return "box";
    case SimpleKind::kL1Norm:
      return "l1";
    case SimpleKind::kScaledGeometry:
      return "scaled_geometry";
  }
  return "unknown";
}

SimpleKind simple_kind_from_string(std::string_view name) {
  if (name == "zero") return SimpleKind::kZero;
  if (name == "simplex") return SimpleKind::kSimplexIndicator;
  if (name == "box") return SimpleKind::kBoxIndicator;
  if (name == "l1") return SimpleKind::kL1Norm;
  if (name == "scaled_geometry") return SimpleKind::kScaledGeometry;
  throw ConfigError("unknown simple function '" + std::string(name) + "'");
}

LegendreGeometry::LegendreGeometry(GeometryKind kind, Eigen::Index dim,
                                   double domain_floor)
    : kind_(kind), dim_(dim), domain_floor_(domain_floor) {
  if (dim <= 0) throw ConfigError("geometry dimension must be positive");
  if (!(domain_floor >= 0.0))
    throw ConfigError("domain_floor must be nonnegative");
}

void LegendreGeometry::check_dim(const Vector& x) const {
  if (x.size() != dim_) {
    throw DomainError("dimension mismatch: expected " + std::to_string(dim_) +
                      ", got " + std::to_string(x.size()));
  }
}

bool LegendreGeometry::in_interior(const Vector& x) const {
  if (x.size() != dim_ || !x.allFinite()) return false;
  if (kind_ == GeometryKind::kNegativeEntropy)
    return (x.array() > domain_floor_).all();
  return true;
}

void LegendreGeometry::check_interior(const Vector& x) const {
  check_dim(x);
  if (!in_interior(x)) {
    throw DomainError("point outside the interior domain of the " +
                      std::string(to_string(kind_)) + " mirror map");
  }
}

double LegendreGeometry::value(const Vector& x) const {
  check_dim(x);
  if (kind_ == GeometryKind::kEuclidean) return 0.5 * x.squaredNorm();
  double total = 0.0;
  for (double xi : x) {
    if (xi < 0.0 || !std::isfinite(xi))
      throw DomainError("entropy evaluated at a negative coordinate");
    if (xi > 0.0) total += xi * std::log(xi);
  }
  return total;
}

Vector LegendreGeometry::grad(const Vector& x) const {
  check_interior(x);
  if (kind_ == GeometryKind::kEuclidean) return x;
  return (1.0 + x.array().log()).matrix();
}

Vector LegendreGeometry::grad_conjugate(const Vector& w) const {
  check_dim(w);
  if (kind_ == GeometryKind::kEuclidean) return w;
  if ((w.array() > kMaxExponent).any())
    throw OverflowError("grad_conjugate: exponent above 700");
  return (w.array() - 1.0).exp().matrix();
}

double LegendreGeometry::bregman_distance(const Vector& x,
                                          const Vector& y) const {
  check_interior(y);
  check_dim(x);
  if (kind_ == GeometryKind::kEuclidean) return 0.5 * (x - y).squaredNorm();
  // Generalized KL divergence; identical to phi(x)-phi(y)-<x-y, grad phi(y)>
  // but without the cancellation of the direct formula.
  double total = 0.0;
  for (Eigen::Index i = 0; i < dim_; ++i) {
    const double xi = x[i];
    const double yi = y[i];
    if (xi < 0.0 || !std::isfinite(xi))
      throw DomainError("bregman_distance: x outside the closed domain");
    total += (xi > 0.0 ? xi * std::log(xi / yi) : 0.0) - xi + yi;
  }
  return std::max(total, 0.0);
}

double LegendreGeometry::norm(const Vector& x) const {
  return kind_ == GeometryKind::kEuclidean ? x.norm() : x.lpNorm<1>();
}

double LegendreGeometry::dual_norm(const Vector& g) const {
  return kind_ == GeometryKind::kEuclidean ? g.norm()
                                           : g.lpNorm<Eigen::Infinity>();
}

SimpleFunction SimpleFunction::l1(double weight) {
  if (!(weight >= 0.0)) throw ConfigError("l1 weight must be nonnegative");
  return {SimpleKind::kL1Norm, weight};
}

SimpleFunction SimpleFunction::scaled_geometry(double weight) {
  if (!(weight >= 0.0))
    throw ConfigError("scaled_geometry weight must be nonnegative");
  return {SimpleKind::kScaledGeometry, weight};
}

bool SimpleFunction::feasible(const Vector& x) const {
  switch (kind) {
    case SimpleKind::kSimplexIndicator:
      return (x.array() >= 0.0).all() &&
             std::abs(x.sum() - 1.0) <= kSimplexSumTolerance;
    case SimpleKind::kBoxIndicator:
      return (x.array().abs() <= 1.0 + kBoxTolerance).all();
    default:
      return x.allFinite();
  }
}

double SimpleFunction::evaluate(const LegendreGeometry& geom,
                                const Vector& x) const {
  switch (kind) {
    case SimpleKind::kZero:
      return 0.0;
    case SimpleKind::kSimplexIndicator:
    case SimpleKind::kBoxIndicator:
      return feasible(x) ? 0.0 : kInf;
    case SimpleKind::kL1Norm:
      return weight * x.lpNorm<1>();
    case SimpleKind::kScaledGeometry:
      return weight * geom.value(x);
  }
  return kInf;
}

Vector soft_threshold(const Vector& w, double threshold) {
  return w.unaryExpr([threshold](double wi) {
    if (wi > threshold) return wi - threshold;
    if (wi < -threshold) return wi + threshold;
    return 0.0;
  });
}

Vector project_simplex(const Vector& w) {
  std::vector<double> sorted(w.begin(), w.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double running = 0.0;
  double shift = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    running += sorted[k];
    const double candidate = (running - 1.0) / static_cast<double>(k + 1);
    if (sorted[k] - candidate > 0.0) shift = candidate;
  }
  return (w.array() - shift).max(0.0).matrix();
}

Vector mirror_prox(const LegendreGeometry& geom, const SimpleFunction& fn,
                   double step, const Vector& w) {
  if (!(step > 0.0)) throw ConfigError("mirror_prox step must be positive");
  if (w.size() != geom.dim())
    throw DomainError("mirror_prox: dimension mismatch");
  if (!w.allFinite()) throw DomainError("mirror_prox: non-finite dual point");

  if (geom.kind() == GeometryKind::kEuclidean) {
    switch (fn.kind) {
      case SimpleKind::kZero:
        return w;
      case SimpleKind::kL1Norm:
        return soft_threshold(w, step * fn.weight);
      case SimpleKind::kBoxIndicator:
        return w.cwiseMax(-1.0).cwiseMin(1.0);
      case SimpleKind::kSimplexIndicator:
        return project_simplex(w);
      case SimpleKind::kScaledGeometry:
        return w / (1.0 + step * fn.weight);
    }
  } else {
    switch (fn.kind) {
      case SimpleKind::kZero:
        return geom.grad_conjugate(w);
      case SimpleKind::kSimplexIndicator: {
        // Softmax after a max shift; the normalization makes the shift exact.
        const Vector e = (w.array() - w.maxCoeff()).exp().matrix();
        return e / e.sum();
      }
      default:
        break;
    }
  }
  throw UnsupportedPair("no closed-form mirror prox for " +
                        pair_name(geom.kind(), fn.kind));
}

}  // namespace bregvr
