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

#include "bregvr/instances.h"

#include <algorithm>
#include <string>
#include <utility>

#include "bregvr/errors.h"
#include "bregvr/random.h"

namespace bregvr {
namespace {

Matrix random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols,
                     double lo, double hi) {
  Matrix out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) out(i, j) = rng.uniform(lo, hi);
  return out;
}

Vector interior_target(Rng& rng, Eigen::Index dim) {
  Vector t = rng.uniform_vector(dim, 0.5, 1.5);
  return t / t.sum();
}

Instance rps_game() {
  Matrix k(3, 3);
  k << 0, -1, 1, 1, 0, -1, -1, 1, 0;
  const LegendreGeometry geom(GeometryKind::kNegativeEntropy, 3);
  SaddleProblem problem(geom, geom, FiniteSumSmooth::zero(3),
                        FiniteSumSmooth::zero(3), SimpleFunction::simplex(),
                        SimpleFunction::simplex(), std::move(k));
  Vector x0(3), v0(3);
  x0 << 0.5, 0.3, 0.2;
  v0 << 0.2, 0.3, 0.5;
  return Instance{"rps-game",
                  "rock-paper-scissors matrix game on two simplices, "
                  "entropy geometries",
                  std::move(problem), std::move(x0), std::move(v0)};
}

Instance quad_1d() {
  const LegendreGeometry geom(GeometryKind::kEuclidean, 1);
  const auto half_square = [] {
    return FiniteSumSmooth(1, {SmoothTerm::affine_quadratic(
                                  Matrix::Ones(1, 1), Vector::Zero(1),
                                  Vector::Zero(1))});
  };
  SaddleProblem problem(geom, geom, half_square(), half_square(),
                        SimpleFunction::zero(), SimpleFunction::zero(),
                        Matrix::Ones(1, 1));
  return Instance{"quad-1d",
                  "h(x) = x^2/2, l(v) = v^2/2, K = [1], saddle at the origin",
                  std::move(problem), Vector::Ones(1), Vector::Ones(1)};
}

// min_x (1/n) sum_i |A_i x - b_i|^2 / 2 + 0.1 |x|_1 + |K x - e|_1, written
// with the dual of the last term over the box and l(v) = <e, v>.
Instance lasso_saddle() {
  constexpr Eigen::Index kD = 8;
  constexpr Eigen::Index kP = 6;
  constexpr int kTerms = 8;
  Rng rng(0x1a550);
  std::vector<SmoothTerm> h_terms;
  for (int i = 0; i < kTerms; ++i) {
    Matrix a = random_matrix(rng, 2, kD, -1.0, 1.0);
    Vector b = rng.uniform_vector(2, -1.0, 1.0);
    h_terms.push_back(
        SmoothTerm::affine_quadratic(std::move(a), std::move(b),
                                     Vector::Zero(kD)));
  }
  Matrix k = random_matrix(rng, kP, kD, -1.0, 1.0);
  const Vector e = rng.uniform_vector(kP, -1.0, 1.0);
  const Vector split = rng.uniform_vector(kP, -0.5, 0.5);
  std::vector<SmoothTerm> ell_terms{SmoothTerm::linear(e + split),
                                    SmoothTerm::linear(e - split)};
  const LegendreGeometry primal(GeometryKind::kEuclidean, kD);
  const LegendreGeometry dual(GeometryKind::kEuclidean, kP);
  SaddleProblem problem(primal, dual, FiniteSumSmooth(kD, std::move(h_terms)),
                        FiniteSumSmooth(kP, std::move(ell_terms)),
                        SimpleFunction::l1(0.1), SimpleFunction::box(),
                        std::move(k));
  return Instance{"lasso-saddle",
                  "least squares + l1 penalty + least absolute deviations, "
                  "dualized over the box",
                  std::move(problem), Vector::Zero(kD), Vector::Zero(kP)};
}

// Terms come in pairs with opposite linear parts and b = 0, so the saddle
// point is exactly (0, 0) while single-term gradients do not vanish there.
FiniteSumSmooth paired_quadratic_sum(Rng& rng, Eigen::Index dim, int count,
                                     double scale) {
  std::vector<SmoothTerm> terms;
  Vector c;
  for (int i = 0; i < count; ++i) {
    Matrix a = random_matrix(rng, 3, dim, -scale, scale);
    if (i % 2 == 0) c = rng.uniform_vector(dim, -1.0, 1.0);
    terms.push_back(SmoothTerm::affine_quadratic(
        std::move(a), Vector::Zero(3), i % 2 == 0 ? c : Vector(-c)));
  }
  return FiniteSumSmooth(dim, std::move(terms));
}

Instance strongly_convex_quad() {
  constexpr Eigen::Index kDim = 10;
  constexpr int kTerms = 10;
  Rng rng(0x5c0);
  FiniteSumSmooth h = paired_quadratic_sum(rng, kDim, kTerms, 0.3);
  FiniteSumSmooth ell = paired_quadratic_sum(rng, kDim, kTerms, 0.3);
  Matrix k = random_matrix(rng, kDim, kDim, -1.0, 1.0);
  k /= Eigen::JacobiSVD<Matrix>(k).singularValues()(0);
  const LegendreGeometry geom(GeometryKind::kEuclidean, kDim);
  SaddleProblem problem(geom, geom, std::move(h), std::move(ell),
                        SimpleFunction::scaled_geometry(1.0),
                        SimpleFunction::scaled_geometry(1.0), std::move(k));
  Vector x0 = rng.uniform_vector(kDim, -1.0, 1.0);
  Vector v0 = rng.uniform_vector(kDim, -1.0, 1.0);
  return Instance{"strongly-convex-quad",
                  "Euclidean quadratic saddle with f = g* = |.|^2/2 "
                  "(alpha = 1), saddle at the origin",
                  std::move(problem), std::move(x0), std::move(v0)};
}

// Circulant payoff (constant row and column sums) plus affine-quadratic
// pulls toward interior targets on both players.
constexpr double kPullScale = 0.3;
FiniteSumSmooth pull_sum(Rng& rng, Eigen::Index dim, int count) {
  const Vector target = interior_target(rng, dim);
  std::vector<SmoothTerm> terms;
  for (int i = 0; i < count; ++i) {
    Matrix a = random_matrix(rng, 2, dim, -kPullScale, kPullScale);
    Vector b = a * target;
    Vector c = rng.uniform_vector(dim, -0.1, 0.1);
    terms.push_back(
        SmoothTerm::affine_quadratic(std::move(a), std::move(b), std::move(c)));
  }
  return FiniteSumSmooth(dim, std::move(terms));
}

Instance entropy_game_20() {
  constexpr Eigen::Index kDim = 20;
  constexpr int kTerms = 20;
  Rng rng(0xe20);
  const Vector row = rng.uniform_vector(kDim, -1.0, 1.0);
  Matrix k(kDim, kDim);
  for (Eigen::Index i = 0; i < kDim; ++i)
    for (Eigen::Index j = 0; j < kDim; ++j) k(i, j) = row((j - i + kDim) % kDim);
  FiniteSumSmooth h = pull_sum(rng, kDim, kTerms);
  FiniteSumSmooth ell = pull_sum(rng, kDim, kTerms);
  const LegendreGeometry geom(GeometryKind::kNegativeEntropy, kDim);
  SaddleProblem problem(geom, geom, std::move(h), std::move(ell),
                        SimpleFunction::simplex(), SimpleFunction::simplex(),
                        std::move(k));
  Vector x0 = rng.uniform_vector(kDim, 0.1, 1.9);
  Vector v0 = rng.uniform_vector(kDim, 0.1, 1.9);
  x0 /= x0.sum();
  v0 /= v0.sum();
  return Instance{"entropy-game-20",
                  "20x20 circulant game with quadratic pulls, entropy "
                  "geometries on both simplices",
                  std::move(problem), std::move(x0), std::move(v0)};
}

}  // namespace

const std::vector<std::string>& builtin_instance_names() {
  static const std::vector<std::string> names{
      "rps-game", "quad-1d", "lasso-saddle", "strongly-convex-quad",
      "entropy-game-20"};
  return names;
}

bool is_builtin_instance(std::string_view name) {
  const auto& names = builtin_instance_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

Instance make_builtin_instance(std::string_view name) {
  if (name == "rps-game") return rps_game();
  if (name == "quad-1d") return quad_1d();
  if (name == "lasso-saddle") return lasso_saddle();
  if (name == "strongly-convex-quad") return strongly_convex_quad();
  if (name == "entropy-game-20") return entropy_game_20();
  throw ConfigError("unknown builtin instance '" + std::string(name) + "'");
}

}  // namespace bregvr
