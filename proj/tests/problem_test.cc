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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "bregvr/errors.h"
#include "bregvr/random.h"
#include "test_util.h"

namespace bregvr {
namespace {

using testing::scalar_quad;
using testing::scalar_sum;
using testing::vec;

constexpr double kInf = std::numeric_limits<double>::infinity();

TEST(SmoothTerm, AffineQuadraticValueAndGradient) {
  // (1/2)|A x - b|^2 + <c, x> with A = [[1, 2]], b = [1], c = [1, -1].
  Matrix a(1, 2);
  a << 1, 2;
  const SmoothTerm t = SmoothTerm::affine_quadratic(a, vec({1}), vec({1, -1}));
  // A x - b = 1 + 2 - 1 = 2 at x = (1, 1): 2 + 0.
  EXPECT_DOUBLE_EQ(t.value(vec({1, 1})), 2.0);
  // A^T (A x - b) + c = (2, 4) + (1, -1).
  EXPECT_EQ(t.gradient(vec({1, 1})), vec({3, 3}));
  EXPECT_NEAR(t.exact_curvature(), 5.0, 1e-14);
  EXPECT_NEAR(t.curvature_estimate(), 5.0, 1e-10);
}

TEST(SmoothTerm, LinearTerm) {
  const SmoothTerm t = SmoothTerm::linear(vec({2, -3}));
  EXPECT_TRUE(t.is_linear());
  EXPECT_DOUBLE_EQ(t.value(vec({1, 1})), -1.0);
  EXPECT_EQ(t.gradient(vec({5, 7})), vec({2, -3}));
  EXPECT_EQ(t.exact_curvature(), 0.0);
}

TEST(SmoothTerm, ShapeChecks) {
  EXPECT_THROW(SmoothTerm::affine_quadratic(Matrix::Ones(2, 2), vec({1}),
                                            vec({0, 0})),
               ConfigError);
  const SmoothTerm t = SmoothTerm::linear(vec({1, 1}));
  EXPECT_THROW(t.gradient(vec({1})), DomainError);
}

TEST(FiniteSum, AverageOfTermGradients) {
  const FiniteSumSmooth h = scalar_sum({scalar_quad(1, 0), scalar_quad(1, 2)});
  EXPECT_EQ(h.gradient(vec({1}))(0), 0.0);
  EXPECT_DOUBLE_EQ(h.value(vec({1})), 0.5);
  EXPECT_DOUBLE_EQ(h.mean_lipschitz(), 1.0);
}

TEST(FiniteSum, LinearConstantsAverage) {
  const FiniteSumSmooth h(2, {SmoothTerm::linear(vec({1, 0})),
                              SmoothTerm::linear(vec({0, 1}))});
  EXPECT_EQ(h.gradient(vec({9, -4})), vec({0.5, 0.5}));
}

TEST(FiniteSum, LipschitzValidation) {
  EXPECT_NO_THROW(scalar_sum({scalar_quad(2, 0)}, {4.0}));
  EXPECT_NO_THROW(scalar_sum({scalar_quad(2, 0)}, {10.0}));
  EXPECT_THROW(scalar_sum({scalar_quad(2, 0)}, {3.9}), ConfigError);
  EXPECT_THROW(scalar_sum({scalar_quad(2, 0)}, {4.0, 1.0}), ConfigError);
  EXPECT_THROW(scalar_sum({scalar_quad(2, 0)}, {-1.0}), ConfigError);
  EXPECT_THROW(FiniteSumSmooth(1, {}), ConfigError);
}

TEST(FiniteSum, ZeroFunction) {
  const FiniteSumSmooth z = FiniteSumSmooth::zero(3);
  EXPECT_EQ(z.count(), 1u);
  EXPECT_EQ(z.lipschitz()[0], 0.0);
  EXPECT_EQ(z.gradient(vec({1, 2, 3})), Vector::Zero(3));
}

TEST(FiniteSum, CollapsedViewMatches) {
  Rng rng(3);
  std::vector<SmoothTerm> terms;
  for (int i = 0; i < 5; ++i) {
    Matrix a = Matrix::Zero(2, 3);
    for (Eigen::Index r = 0; r < 2; ++r)
      a.row(r) = rng.uniform_vector(3, -1, 1).transpose();
    terms.push_back(SmoothTerm::affine_quadratic(
        a, rng.uniform_vector(2, -1, 1), rng.uniform_vector(3, -1, 1)));
  }
  terms.push_back(SmoothTerm::linear(rng.uniform_vector(3, -1, 1)));
  const FiniteSumSmooth h(3, terms);
  const FiniteSumSmooth one = h.collapsed();
  EXPECT_EQ(one.count(), 1u);
  EXPECT_DOUBLE_EQ(one.lipschitz()[0], h.mean_lipschitz());
  for (int it = 0; it < 50; ++it) {
    const Vector x = rng.uniform_vector(3, -3, 3);
    EXPECT_NEAR(one.value(x), h.value(x), 1e-12);
    EXPECT_LE((one.gradient(x) - h.gradient(x)).norm(), 1e-12);
  }
}

TEST(FiniteSum, GradientMatchesFiniteDifferences) {
  Rng rng(4);
  Matrix a(3, 4);
  for (Eigen::Index r = 0; r < 3; ++r)
    a.row(r) = rng.uniform_vector(4, -1, 1).transpose();
  const SmoothTerm t = SmoothTerm::affine_quadratic(
      a, rng.uniform_vector(3, -1, 1), rng.uniform_vector(4, -1, 1));
  for (int it = 0; it < 100; ++it) {
    const Vector x = rng.uniform_vector(4, -2, 2);
    const Vector g = t.gradient(x);
    for (Eigen::Index i = 0; i < 4; ++i) {
      Vector e = Vector::Zero(4);
      e(i) = 1e-6;
      const double fd = (t.value(x + e) - t.value(x - e)) / 2e-6;
      EXPECT_NEAR(fd, g(i), 1e-5 * std::max(1.0, std::abs(g(i))));
    }
  }
}

TEST(OperatorNorm, PairingFormulas) {
  Matrix k(2, 2);
  k << 3, 0, 4, 0;  // one nonzero column (3, 4)
  EXPECT_NEAR(operator_norm(k, GeometryKind::kEuclidean,
                            GeometryKind::kEuclidean),
              5.0, 1e-12);
  EXPECT_EQ(operator_norm(k, GeometryKind::kNegativeEntropy,
                          GeometryKind::kNegativeEntropy),
            4.0);
  EXPECT_EQ(operator_norm(k, GeometryKind::kEuclidean,
                          GeometryKind::kNegativeEntropy),
            4.0);
  EXPECT_EQ(operator_norm(k, GeometryKind::kNegativeEntropy,
                          GeometryKind::kEuclidean),
            5.0);
}

TEST(OperatorNorm, DominatesRandomRatios) {
  Rng rng(5);
  Matrix k(4, 6);
  for (Eigen::Index r = 0; r < 4; ++r)
    k.row(r) = rng.uniform_vector(6, -1, 1).transpose();
  for (auto primal : {GeometryKind::kEuclidean, GeometryKind::kNegativeEntropy})
    for (auto dual :
         {GeometryKind::kEuclidean, GeometryKind::kNegativeEntropy}) {
      const CouplingOperator op(k, primal, dual);
      const LegendreGeometry pg(primal, 6), dg(dual, 4);
      for (int it = 0; it < 100; ++it) {
        const Vector x = rng.uniform_vector(6, -1, 1);
        EXPECT_LE(dg.dual_norm(op.apply(x)),
                  op.norm() * pg.norm(x) * (1 + 1e-12));
      }
      const Vector x = rng.uniform_vector(6, -1, 1);
      const Vector v = rng.uniform_vector(4, -1, 1);
      EXPECT_NEAR(op.apply(x).dot(v), x.dot(op.adjoint_apply(v)), 1e-12);
    }
}

TEST(SaddleProblem, ConstantsAndValidation) {
  const SaddleProblem p = testing::two_term_problem();
  EXPECT_DOUBLE_EQ(p.mu0(), 1.0);
  EXPECT_EQ(p.alpha(), 0.0);
  const LegendreGeometry g1(GeometryKind::kEuclidean, 1);
  const LegendreGeometry g2(GeometryKind::kEuclidean, 2);
  EXPECT_THROW(SaddleProblem(g1, g2, scalar_sum({scalar_quad(1, 0)}),
                             scalar_sum({scalar_quad(1, 0)}),
                             SimpleFunction::zero(), SimpleFunction::zero(),
                             Matrix::Ones(1, 1)),
               ConfigError);
  const SaddleProblem s(g1, g1, scalar_sum({scalar_quad(1, 0)}),
                        scalar_sum({scalar_quad(1, 0)}),
                        SimpleFunction::scaled_geometry(2.0),
                        SimpleFunction::scaled_geometry(0.5),
                        Matrix::Ones(1, 1));
  EXPECT_EQ(s.alpha(), 0.5);
}

TEST(Gap, Examples) {
  const SaddleProblem rps = testing::rps_problem();
  const Vector u = Vector::Constant(3, 1.0 / 3);
  EXPECT_NEAR(gap(rps, u, u), 0.0, 1e-16);
  EXPECT_EQ(gap(rps, vec({2, 0, 0}), u), kInf);
  EXPECT_EQ(gap(rps, u, vec({2, 0, 0})), -kInf);

  const LegendreGeometry g(GeometryKind::kEuclidean, 1);
  const SaddleProblem half_square(g, g, scalar_sum({scalar_quad(1, 0)}),
                                  FiniteSumSmooth::zero(1),
                                  SimpleFunction::zero(),
                                  SimpleFunction::zero(), Matrix::Zero(1, 1));
  EXPECT_DOUBLE_EQ(gap(half_square, vec({2}), vec({0})), 2.0);
}

TEST(GapPair, Examples) {
  const SaddleProblem rps = testing::rps_problem();
  const Vector u = Vector::Constant(3, 1.0 / 3);
  EXPECT_NEAR(primal_dual_gap_pair(rps, u, u, u, u), 0.0, 1e-16);
  EXPECT_NEAR(primal_dual_gap_pair(rps, vec({1, 0, 0}), u, u, u), 0.0, 1e-16);

  const SaddleProblem q = testing::quad_1d_problem();
  EXPECT_DOUBLE_EQ(
      primal_dual_gap_pair(q, vec({1}), vec({1}), vec({0}), vec({0})), 1.0);
}

TEST(GapPair, NegativeSignalsWrongSaddle) {
  const SaddleProblem q = testing::quad_1d_problem();
  // (1, 1) is not a saddle point: G(0, 1) - G(1, 0) = -1/2 - 1/2.
  EXPECT_THROW(
      primal_dual_gap_pair(q, vec({0}), vec({0}), vec({1}), vec({1})),
      NegativeGapError);
}

TEST(FullGradients, Examples) {
  const SaddleProblem p = testing::two_term_problem();
  const auto [gh, gl] = full_gradients(p, vec({1}), vec({3}));
  EXPECT_EQ(gh(0), 0.0);
  EXPECT_EQ(gl(0), 3.0);
  const SaddleProblem rps = testing::rps_problem();
  EXPECT_EQ(full_gradients(rps, vec({0.2, 0.3, 0.5}), vec({0.1, 0.1, 0.8}))
                .second,
            Vector::Zero(3));
}

TEST(GapProperty, ConvexConcave) {
  Rng rng(6);
  const LegendreGeometry g(GeometryKind::kEuclidean, 3);
  Matrix k(3, 3);
  for (Eigen::Index r = 0; r < 3; ++r)
    k.row(r) = rng.uniform_vector(3, -1, 1).transpose();
  Matrix a = Matrix::Identity(3, 3);
  const SaddleProblem p(
      g, g, FiniteSumSmooth(3, {SmoothTerm::affine_quadratic(a, vec({1, 0, 0}),
                                                             vec({0, 1, 0}))}),
      FiniteSumSmooth(3, {SmoothTerm::affine_quadratic(2 * a, vec({0, 0, 1}),
                                                       vec({0, 0, 0}))}),
      SimpleFunction::l1(0.3), SimpleFunction::scaled_geometry(1.0), k);
  for (int it = 0; it < 500; ++it) {
    const Vector x1 = rng.uniform_vector(3, -2, 2);
    const Vector x2 = rng.uniform_vector(3, -2, 2);
    const Vector v1 = rng.uniform_vector(3, -2, 2);
    const Vector v2 = rng.uniform_vector(3, -2, 2);
    const double t = rng.uniform();
    EXPECT_LE(gap(p, t * x1 + (1 - t) * x2, v1),
              t * gap(p, x1, v1) + (1 - t) * gap(p, x2, v1) + 1e-9);
    EXPECT_GE(gap(p, x1, t * v1 + (1 - t) * v2),
              t * gap(p, x1, v1) + (1 - t) * gap(p, x1, v2) - 1e-9);
  }
}

TEST(SaddleProblem, ProductGeometry) {
  const SaddleProblem rps = testing::rps_problem();
  const Vector u = Vector::Constant(3, 1.0 / 3);
  EXPECT_EQ(rps.product_bregman(u, u, u, u), 0.0);
  EXPECT_DOUBLE_EQ(rps.product_norm(vec({3, 0, 0}), vec({0, 4, 0})), 5.0);
}

}  // namespace
}  // namespace bregvr
