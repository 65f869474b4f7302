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

// The convex-concave saddle problem
//
//   min_x max_v  G(x, v) = h(x) + f(x) + <Kx, v> - g*(v) - l(v)
//
// with h and l finite averages of smooth terms, f and g* simple functions
// attached to mirror maps phi and psi, and K a dense p x d matrix.

#ifndef BREGVR_PROBLEM_H_
#define BREGVR_PROBLEM_H_

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "bregvr/geometry.h"
#include "bregvr/types.h"

namespace bregvr {

// One smooth summand: 0.5 |A x - b|^2 + <c, x>. A linear term has A with
// zero rows.
class SmoothTerm {
 public:
  static SmoothTerm affine_quadratic(Matrix a, Vector b, Vector c);
  static SmoothTerm linear(Vector c);

  Eigen::Index dim() const { return c_.size(); }
  bool is_linear() const { return a_.rows() == 0; }
  const Matrix& a() const { return a_; }
  const Vector& b() const { return b_; }
  const Vector& c() const { return c_; }

  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;

  // Largest eigenvalue of A^T A by power iteration (0 for linear terms).
  double curvature_estimate() const;
  // Same quantity from a symmetric eigendecomposition.
  double exact_curvature() const;

 private:
  SmoothTerm(Matrix a, Vector b, Vector c)
      : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {}

  Matrix a_;
  Vector b_;
  Vector c_;
};

// h = (1/n) sum_i h_i with per-term gradient Lipschitz constants.
class FiniteSumSmooth {
 public:
  // Lipschitz constants default to the exact curvature of each term. When
  // supplied, each must dominate the power-iteration estimate.
  FiniteSumSmooth(Eigen::Index dim, std::vector<SmoothTerm> terms,
                  std::vector<double> lipschitz = {});

  // A single zero linear term with Lipschitz constant 0.
  static FiniteSumSmooth zero(Eigen::Index dim);

  Eigen::Index dim() const { return dim_; }
  std::size_t count() const { return terms_.size(); }
  const std::vector<SmoothTerm>& terms() const { return terms_; }
  std::span<const double> lipschitz() const { return lipschitz_; }
  double mean_lipschitz() const { return mean_lipschitz_; }

  double term_value(std::size_t i, const Vector& x) const;
  Vector term_gradient(std::size_t i, const Vector& x) const;

  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;

  // The same function written as a single term (rows of every A_i stacked
  // and scaled by 1/sqrt(n)), with Lipschitz constant mean_lipschitz().
  FiniteSumSmooth collapsed() const;

 private:
  Eigen::Index dim_;
  std::vector<SmoothTerm> terms_;
  std::vector<double> lipschitz_;
  double mean_lipschitz_ = 0.0;
};

// Operator norm of K from the primal paired norm to the dual of the dual
// paired norm. The pairing selects the formula:
//   l2 -> l2     largest singular value
//   l1 -> linf   max |K_ij|
//   l2 -> linf   max row 2-norm
//   l1 -> l2     max column 2-norm
double operator_norm(const Matrix& k, GeometryKind primal, GeometryKind dual);

class CouplingOperator {
 public:
  CouplingOperator(Matrix k, GeometryKind primal, GeometryKind dual);

  const Matrix& matrix() const { return k_; }
  Eigen::Index rows() const { return k_.rows(); }
  Eigen::Index cols() const { return k_.cols(); }
  double norm() const { return norm_; }

  Vector apply(const Vector& x) const { return k_ * x; }
  Vector adjoint_apply(const Vector& v) const { return k_.transpose() * v; }

 private:
  Matrix k_;
  double norm_;
};

class SaddleProblem {
 public:
  SaddleProblem(LegendreGeometry primal_geometry,
                LegendreGeometry dual_geometry, FiniteSumSmooth h,
                FiniteSumSmooth ell, SimpleFunction f, SimpleFunction g_star,
                Matrix k);

  const LegendreGeometry& primal_geometry() const { return primal_geometry_; }
  const LegendreGeometry& dual_geometry() const { return dual_geometry_; }
  const FiniteSumSmooth& h() const { return h_; }
  const FiniteSumSmooth& ell() const { return ell_; }
  const SimpleFunction& f() const { return f_; }
  const SimpleFunction& g_star() const { return g_star_; }
  const CouplingOperator& coupling() const { return coupling_; }

  Eigen::Index primal_dim() const { return primal_geometry_.dim(); }
  Eigen::Index dual_dim() const { return dual_geometry_.dim(); }

  // max(mean Lipschitz of h, mean Lipschitz of l).
  double mu0() const { return mu0_; }
  // Common relative strong convexity of f and g*: the smaller of the two.
  double alpha() const { return alpha_; }

  // D_{phi (+) psi}((x, v), (y, u)).
  double product_bregman(const Vector& x, const Vector& v, const Vector& y,
                         const Vector& u) const;
  // sqrt(|x|^2 + |v|^2) in the paired norms.
  double product_norm(const Vector& x, const Vector& v) const;

  // Same problem with h and l replaced by their single-term views.
  SaddleProblem collapsed() const;

 private:
  LegendreGeometry primal_geometry_;
  LegendreGeometry dual_geometry_;
  FiniteSumSmooth h_;
  FiniteSumSmooth ell_;
  SimpleFunction f_;
  SimpleFunction g_star_;
  CouplingOperator coupling_;
  double mu0_;
  double alpha_;
};

// G(x, v). Returns +inf when x is outside dom f, otherwise -inf when v is
// outside dom g*.
double gap(const SaddleProblem& problem, const Vector& x, const Vector& v);

// G(x, v*) - G(x*, v) for a saddle point (x*, v*). Throws NegativeGapError
// below -1e-9.
double primal_dual_gap_pair(const SaddleProblem& problem, const Vector& x,
                            const Vector& v, const Vector& x_star,
                            const Vector& v_star);

inline constexpr double kNegativeGapTolerance = 1e-9;

// (grad h(y), grad l(u)) as exact finite-sum averages.
std::pair<Vector, Vector> full_gradients(const SaddleProblem& problem,
                                         const Vector& y, const Vector& u);

}  // namespace bregvr

#endif  // BREGVR_PROBLEM_H_
