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

#include "bregvr/baselines.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>

#include "bregvr/certificates.h"
#include "bregvr/errors.h"

namespace bregvr {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Fraction of the certified step supremum used by the deterministic oracle.
constexpr double kOracleStepFraction = 0.9;

SolverConfig deterministic_config(double gamma) {
  SolverConfig config;
  config.gamma = gamma;
  config.theta = 1;
  config.m = 1;
  config.weights = WeightSchedule::kUniformAverage;
  return config;
}

bool is_zero_function(const FiniteSumSmooth& fn) {
  return std::all_of(fn.terms().begin(), fn.terms().end(),
                     [](const SmoothTerm& t) {
                       return t.is_linear() && t.c().isZero(0.0);
                     });
}

bool quadratic_simple(const SimpleFunction& fn) {
  return fn.kind == SimpleKind::kZero ||
         fn.kind == SimpleKind::kScaledGeometry;
}

// grad fn(x) = H x - r.
std::pair<Matrix, Vector> affine_gradient(const FiniteSumSmooth& fn) {
  const Eigen::Index d = fn.dim();
  Matrix hess = Matrix::Zero(d, d);
  Vector offset = Vector::Zero(d);
  for (const SmoothTerm& t : fn.terms()) {
    if (!t.is_linear()) {
      hess += t.a().transpose() * t.a();
      offset += t.a().transpose() * t.b();
    }
    offset -= t.c();
  }
  const double n = static_cast<double>(fn.count());
  return {hess / n, offset / n};
}

std::optional<std::pair<Vector, Vector>> quadratic_closed_form(
    const SaddleProblem& problem) {
  if (problem.primal_geometry().kind() != GeometryKind::kEuclidean ||
      problem.dual_geometry().kind() != GeometryKind::kEuclidean ||
      !quadratic_simple(problem.f()) || !quadratic_simple(problem.g_star()))
    return std::nullopt;
  const Eigen::Index d = problem.primal_dim();
  const Eigen::Index p = problem.dual_dim();
  auto [hess_h, r_h] = affine_gradient(problem.h());
  auto [hess_l, r_l] = affine_gradient(problem.ell());
  const Matrix& k = problem.coupling().matrix();

  // Stationarity of G:
  //   (H + mu_f I) x + K^T v = r_h
  //   K x - (S + mu_g I) v   = -r_l
  Matrix system(d + p, d + p);
  system.topLeftCorner(d, d) =
      hess_h + problem.f().weight * Matrix::Identity(d, d);
  system.topRightCorner(d, p) = k.transpose();
  system.bottomLeftCorner(p, d) = k;
  system.bottomRightCorner(p, p) =
      -(hess_l + problem.g_star().weight * Matrix::Identity(p, p));
  Vector rhs(d + p);
  rhs << r_h, -r_l;

  Eigen::FullPivLU<Matrix> lu(system);
  if (!lu.isInvertible()) return std::nullopt;
  const Vector sol = lu.solve(rhs);
  return std::make_pair(Vector(sol.head(d)), Vector(sol.tail(p)));
}

std::optional<std::pair<Vector, Vector>> game_closed_form(
    const SaddleProblem& problem) {
  if (problem.f().kind != SimpleKind::kSimplexIndicator ||
      problem.g_star().kind != SimpleKind::kSimplexIndicator ||
      !is_zero_function(problem.h()) || !is_zero_function(problem.ell()))
    return std::nullopt;
  const Matrix& k = problem.coupling().matrix();
  const Vector row_sums = k.rowwise().sum();
  const Vector col_sums = k.colwise().sum().transpose();
  const double scale = std::max(1.0, k.cwiseAbs().maxCoeff());
  const double tol = 1e-12 * scale * static_cast<double>(k.size());
  const auto constant = [tol](const Vector& s) {
    return (s.array() - s[0]).abs().maxCoeff() <= tol;
  };
  if (!constant(row_sums) || !constant(col_sums)) return std::nullopt;
  const Eigen::Index d = problem.primal_dim();
  const Eigen::Index p = problem.dual_dim();
  return std::make_pair(Vector(Vector::Constant(d, 1.0 / d)),
                        Vector(Vector::Constant(p, 1.0 / p)));
}

std::optional<std::pair<Vector, Vector>> closed_form(
    const SaddleProblem& problem) {
  if (auto q = quadratic_closed_form(problem)) return q;
  return game_closed_form(problem);
}

double deterministic_step_size(const SaddleProblem& problem) {
  const SaddleProblem view = problem.collapsed();
  const SamplingScheme scheme = make_scheme(view, SamplingMode::kUniform);
  const double sup =
      ergodic_step_supremum(CertificateConstants::from(view, scheme));
  return std::isfinite(sup) ? kOracleStepFraction * sup : 1.0;
}

Vector sample_feasible(const LegendreGeometry& geom, const SimpleFunction& fn,
                       const Vector& center, Rng& rng) {
  const Eigen::Index dim = geom.dim();
  switch (fn.kind) {
    case SimpleKind::kSimplexIndicator:
      return rng.dirichlet(dim);
    case SimpleKind::kBoxIndicator:
      return rng.uniform_vector(dim, -1.0, 1.0);
    default:
      break;
  }
  if (geom.kind() == GeometryKind::kNegativeEntropy)
    return (center.array() * rng.uniform_vector(dim, -1.0, 1.0).array().exp())
        .matrix();
  return center + rng.uniform_vector(dim, -1.0, 1.0);
}

}  // namespace

DeterministicBaseline::DeterministicBaseline(const SaddleProblem& problem,
                                             double gamma)
    : view_(problem.collapsed()),
      scheme_(make_scheme(view_, SamplingMode::kUniform)),
      config_(deterministic_config(gamma)) {
  config_.validate();
}

StageState DeterministicBaseline::start(const Vector& x0,
                                        const Vector& v0) const {
  view_.primal_geometry().check_interior(x0);
  view_.dual_geometry().check_interior(v0);
  return StageState{x0,
                    x0,
                    v0,
                    v0,
                    Vector::Zero(view_.primal_dim()),
                    Vector::Zero(view_.dual_dim()),
                    AnchorState::at(view_, x0, v0)};
}

void DeterministicBaseline::step(StageState& state) const {
  // Single-term sums: every draw selects index 0, the stream is irrelevant.
  Rng rng(0);
  inner_step(view_, scheme_, config_, state, 0.0, rng);
}

StageState deterministic_step(const SaddleProblem& problem, double gamma,
                              const StageState& state) {
  const DeterministicBaseline baseline(problem, gamma);
  StageState next = state;
  baseline.step(next);
  return next;
}

void plain_sgd_step(const SaddleProblem& problem, const SamplingScheme& scheme,
                    double gamma_k, StageState& state, Rng& rng, int theta) {
  if (!scheme.is_uniform())
    throw ConfigError("plain SGD baseline expects a uniform scheme");
  if (!(gamma_k > 0.0)) throw ConfigError("step must be positive");
  if (theta != 0 && theta != 1) throw ConfigError("theta must be 0 or 1");
  const double th = static_cast<double>(theta);
  const Vector y = state.x_curr + th * (state.x_curr - state.x_prev);
  const Vector u = state.v_curr + th * (state.v_curr - state.v_prev);
  const auto [i, j] = sample_pair(scheme, rng);
  const double n = static_cast<double>(problem.h().count());
  const double n_prime = static_cast<double>(problem.ell().count());
  const Vector z = problem.h().term_gradient(i, y) / (scheme.q()[i] * n);
  const Vector t =
      problem.ell().term_gradient(j, u) / (scheme.q_prime()[j] * n_prime);
  mirror_update(problem, gamma_k, y, u, z, t, state, 0.0);
}

std::string_view to_string(OracleMethod method) {
  switch (method) {
    case OracleMethod::kClosedForm:
      return "closed_form";
    case OracleMethod::kHighAccuracyDeterministic:
      return "deterministic";
    case OracleMethod::kAuto:
      return "auto";
  }
  return "unknown";
}

OracleMethod oracle_method_from_string(std::string_view name) {
  if (name == "closed_form") return OracleMethod::kClosedForm;
  if (name == "deterministic") return OracleMethod::kHighAccuracyDeterministic;
  if (name == "auto") return OracleMethod::kAuto;
  throw ConfigError("unknown oracle method '" + std::string(name) + "'");
}

Vector default_start(const LegendreGeometry& geom, const SimpleFunction& fn) {
  const Eigen::Index dim = geom.dim();
  if (fn.kind == SimpleKind::kSimplexIndicator ||
      geom.kind() == GeometryKind::kNegativeEntropy)
    return Vector::Constant(dim, 1.0 / static_cast<double>(dim));
  return Vector::Zero(dim);
}

double saddle_residual(const SaddleProblem& problem, const Vector& x_star,
                       const Vector& v_star, int probes, std::uint64_t seed) {
  const double value = gap(problem, x_star, v_star);
  if (!std::isfinite(value)) return kInf;
  Rng rng(seed);
  double worst = 0.0;
  for (int it = 0; it < probes; ++it) {
    const Vector x = sample_feasible(problem.primal_geometry(), problem.f(),
                                     x_star, rng);
    const Vector v = sample_feasible(problem.dual_geometry(),
                                     problem.g_star(), v_star, rng);
    worst = std::max(worst, gap(problem, x_star, v) - value);
    worst = std::max(worst, value - gap(problem, x, v_star));
  }
  return worst;
}

SaddleOracle find_saddle(const SaddleProblem& problem, OracleMethod method,
                         const OracleOptions& options) {
  SaddleOracle oracle;
  bool solved = false;
  if (method == OracleMethod::kClosedForm || method == OracleMethod::kAuto) {
    if (auto point = closed_form(problem)) {
      oracle.method = OracleMethod::kClosedForm;
      oracle.x = std::move(point->first);
      oracle.v = std::move(point->second);
      solved = true;
    } else if (method == OracleMethod::kClosedForm) {
      throw OracleFailure("no closed form applies to this problem");
    }
  }
  if (!solved) {
    const DeterministicBaseline baseline(problem,
                                         deterministic_step_size(problem));
    StageState state = baseline.start(
        options.x_start.value_or(
            default_start(problem.primal_geometry(), problem.f())),
        options.v_start.value_or(
            default_start(problem.dual_geometry(), problem.g_star())));
    std::int64_t it = 0;
    while (it < options.max_iterations) {
      baseline.step(state);
      ++it;
      const double moved =
          (problem.primal_geometry().norm(state.x_curr - state.x_prev) +
           problem.dual_geometry().norm(state.v_curr - state.v_prev)) /
          baseline.gamma();
      if (moved <= options.fixed_point_tolerance) break;
    }
    oracle.method = OracleMethod::kHighAccuracyDeterministic;
    oracle.x = state.x_curr;
    oracle.v = state.v_curr;
    oracle.iterations = it;
  }
  oracle.residual = saddle_residual(problem, oracle.x, oracle.v,
                                    options.probes, options.probe_seed);
  if (!(oracle.residual <= options.max_residual)) {
    throw OracleFailure("saddle residual " + std::to_string(oracle.residual) +
                        " exceeds " + std::to_string(options.max_residual));
  }
  return oracle;
}

}  // namespace bregvr
