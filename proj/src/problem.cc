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

#include "bregvr/problem.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "bregvr/errors.h"

namespace bregvr {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kPowerIterations = 2000;
constexpr double kLipschitzValidationTolerance = 1e-6;

void check_dim(const Vector& x, Eigen::Index dim, const char* what) {
  if (x.size() != dim) {
    throw DomainError(std::string(what) + ": expected dimension " +
                      std::to_string(dim) + ", got " +
                      std::to_string(x.size()));
  }
}

// Largest eigenvalue of the symmetric PSD matrix m by power iteration. The
// Rayleigh quotient never exceeds the true value.
double power_iteration(const Matrix& m) {
  if (m.rows() == 0 || m.norm() == 0.0) return 0.0;
  Vector q = Vector::LinSpaced(m.rows(), 1.0, 2.0);
  q.normalize();
  double estimate = 0.0;
  for (int it = 0; it < kPowerIterations; ++it) {
    Vector next = m * q;
    const double rayleigh = q.dot(next);
    const double len = next.norm();
    if (len == 0.0) return 0.0;
    next /= len;
    const bool settled =
        std::abs(rayleigh - estimate) <= 1e-15 * std::abs(rayleigh);
    estimate = rayleigh;
    q = std::move(next);
    if (settled) break;
  }
  return estimate;
}

double largest_singular_value(const Matrix& k) {
  if (k.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(k);
  return svd.singularValues().size() > 0 ? svd.singularValues()[0] : 0.0;
}

}  // namespace

SmoothTerm SmoothTerm::affine_quadratic(Matrix a, Vector b, Vector c) {
  if (a.rows() != b.size())
    throw ConfigError("affine_quadratic: rows(A) must equal size(b)");
  if (a.cols() != c.size())
    throw ConfigError("affine_quadratic: cols(A) must equal size(c)");
  return SmoothTerm(std::move(a), std::move(b), std::move(c));
}

SmoothTerm SmoothTerm::linear(Vector c) {
  const Eigen::Index dim = c.size();
  return SmoothTerm(Matrix(0, dim), Vector(0), std::move(c));
}

double SmoothTerm::value(const Vector& x) const {
  check_dim(x, dim(), "SmoothTerm::value");
  double out = c_.dot(x);
  if (!is_linear()) out += 0.5 * (a_ * x - b_).squaredNorm();
  return out;
}

Vector SmoothTerm::gradient(const Vector& x) const {
  check_dim(x, dim(), "SmoothTerm::gradient");
  if (is_linear()) return c_;
  return a_.transpose() * (a_ * x - b_) + c_;
}

double SmoothTerm::curvature_estimate() const {
  if (is_linear()) return 0.0;
  return power_iteration(a_.transpose() * a_);
}

double SmoothTerm::exact_curvature() const {
  if (is_linear()) return 0.0;
  const double s = largest_singular_value(a_);
  return s * s;
}

FiniteSumSmooth::FiniteSumSmooth(Eigen::Index dim,
                                 std::vector<SmoothTerm> terms,
                                 std::vector<double> lipschitz)
    : dim_(dim), terms_(std::move(terms)), lipschitz_(std::move(lipschitz)) {
  if (dim <= 0) throw ConfigError("finite sum: dimension must be positive");
  if (terms_.empty()) throw ConfigError("finite sum: at least one term");
  for (const SmoothTerm& t : terms_) {
    if (t.dim() != dim) throw ConfigError("finite sum: term dimension");
  }
  if (lipschitz_.empty()) {
    lipschitz_.reserve(terms_.size());
    for (const SmoothTerm& t : terms_) lipschitz_.push_back(t.exact_curvature());
  } else {
    if (lipschitz_.size() != terms_.size())
      throw ConfigError("finite sum: one Lipschitz constant per term");
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      const double mu = lipschitz_[i];
      if (!(mu >= 0.0) || !std::isfinite(mu))
        throw ConfigError("finite sum: Lipschitz constants must be finite "
                          "and nonnegative");
      const double estimate = terms_[i].curvature_estimate();
      if (mu < estimate * (1.0 - kLipschitzValidationTolerance)) {
        throw ConfigError("finite sum: Lipschitz constant " +
                          std::to_string(mu) + " of term " + std::to_string(i) +
                          " is below the curvature " +
                          std::to_string(estimate));
      }
    }
  }
  mean_lipschitz_ =
      std::accumulate(lipschitz_.begin(), lipschitz_.end(), 0.0) /
      static_cast<double>(lipschitz_.size());
}

FiniteSumSmooth FiniteSumSmooth::zero(Eigen::Index dim) {
  std::vector<SmoothTerm> terms;
  terms.push_back(SmoothTerm::linear(Vector::Zero(dim)));
  return FiniteSumSmooth(dim, std::move(terms), {0.0});
}

double FiniteSumSmooth::term_value(std::size_t i, const Vector& x) const {
  return terms_.at(i).value(x);
}

Vector FiniteSumSmooth::term_gradient(std::size_t i, const Vector& x) const {
  return terms_.at(i).gradient(x);
}

double FiniteSumSmooth::value(const Vector& x) const {
  double total = 0.0;
  for (const SmoothTerm& t : terms_) total += t.value(x);
  return total / static_cast<double>(terms_.size());
}

Vector FiniteSumSmooth::gradient(const Vector& x) const {
  Vector total = Vector::Zero(dim_);
  for (const SmoothTerm& t : terms_) total += t.gradient(x);
  return total / static_cast<double>(terms_.size());
}

FiniteSumSmooth FiniteSumSmooth::collapsed() const {
  const double n = static_cast<double>(terms_.size());
  Eigen::Index rows = 0;
  for (const SmoothTerm& t : terms_) rows += t.a().rows();
  Vector c = Vector::Zero(dim_);
  for (const SmoothTerm& t : terms_) c += t.c();
  c /= n;

  std::vector<SmoothTerm> single;
  if (rows == 0) {
    single.push_back(SmoothTerm::linear(std::move(c)));
  } else {
    const double scale = 1.0 / std::sqrt(n);
    Matrix a(rows, dim_);
    Vector b(rows);
    Eigen::Index offset = 0;
    for (const SmoothTerm& t : terms_) {
      const Eigen::Index r = t.a().rows();
      if (r == 0) continue;
      a.middleRows(offset, r) = scale * t.a();
      b.segment(offset, r) = scale * t.b();
      offset += r;
    }
    single.push_back(
        SmoothTerm::affine_quadratic(std::move(a), std::move(b), std::move(c)));
  }
  return FiniteSumSmooth(dim_, std::move(single), {mean_lipschitz_});
}

double operator_norm(const Matrix& k, GeometryKind primal, GeometryKind dual) {
  if (k.size() == 0) return 0.0;
  const bool l1_primal = primal == GeometryKind::kNegativeEntropy;
  const bool l1_dual = dual == GeometryKind::kNegativeEntropy;
  if (!l1_primal && !l1_dual) return largest_singular_value(k);
  if (l1_primal && l1_dual) return k.cwiseAbs().maxCoeff();
  if (l1_dual) return k.rowwise().norm().maxCoeff();
  return k.colwise().norm().maxCoeff();
}

CouplingOperator::CouplingOperator(Matrix k, GeometryKind primal,
                                   GeometryKind dual)
    : k_(std::move(k)), norm_(operator_norm(k_, primal, dual)) {
  if (!k_.allFinite()) throw ConfigError("coupling matrix must be finite");
}

SaddleProblem::SaddleProblem(LegendreGeometry primal_geometry,
                             LegendreGeometry dual_geometry, FiniteSumSmooth h,
                             FiniteSumSmooth ell, SimpleFunction f,
                             SimpleFunction g_star, Matrix k)
    : primal_geometry_(std::move(primal_geometry)),
      dual_geometry_(std::move(dual_geometry)),
      h_(std::move(h)),
      ell_(std::move(ell)),
      f_(f),
      g_star_(g_star),
      coupling_(std::move(k), primal_geometry_.kind(), dual_geometry_.kind()),
      mu0_(std::max(h_.mean_lipschitz(), ell_.mean_lipschitz())),
      alpha_(std::min(f.relative_strong_convexity(),
                      g_star.relative_strong_convexity())) {
  const Eigen::Index d = primal_geometry_.dim();
  const Eigen::Index p = dual_geometry_.dim();
  if (h_.dim() != d) throw ConfigError("h must act on the primal dimension");
  if (ell_.dim() != p) throw ConfigError("l must act on the dual dimension");
  if (coupling_.rows() != p || coupling_.cols() != d)
    throw ConfigError("K must be p x d (" + std::to_string(p) + " x " +
                      std::to_string(d) + ")");
}

double SaddleProblem::product_bregman(const Vector& x, const Vector& v,
                                      const Vector& y, const Vector& u) const {
  return primal_geometry_.bregman_distance(x, y) +
         dual_geometry_.bregman_distance(v, u);
}

double SaddleProblem::product_norm(const Vector& x, const Vector& v) const {
  return std::hypot(primal_geometry_.norm(x), dual_geometry_.norm(v));
}

SaddleProblem SaddleProblem::collapsed() const {
  return SaddleProblem(primal_geometry_, dual_geometry_, h_.collapsed(),
                       ell_.collapsed(), f_, g_star_, coupling_.matrix());
}

double gap(const SaddleProblem& problem, const Vector& x, const Vector& v) {
  check_dim(x, problem.primal_dim(), "gap");
  check_dim(v, problem.dual_dim(), "gap");
  const double fx = problem.f().evaluate(problem.primal_geometry(), x);
  if (fx == kInf) return kInf;
  const double gv = problem.g_star().evaluate(problem.dual_geometry(), v);
  if (gv == kInf) return -kInf;
  return problem.h().value(x) + fx + problem.coupling().apply(x).dot(v) - gv -
         problem.ell().value(v);
}

double primal_dual_gap_pair(const SaddleProblem& problem, const Vector& x,
                            const Vector& v, const Vector& x_star,
                            const Vector& v_star) {
  const double pair = gap(problem, x, v_star) - gap(problem, x_star, v);
  if (std::isnan(pair) || pair < -kNegativeGapTolerance) {
    throw NegativeGapError("gap pair " + std::to_string(pair) +
                           " is negative: reference is not a saddle point");
  }
  return pair;
}

std::pair<Vector, Vector> full_gradients(const SaddleProblem& problem,
                                         const Vector& y, const Vector& u) {
  return {problem.h().gradient(y), problem.ell().gradient(u)};
}

}  // namespace bregvr
