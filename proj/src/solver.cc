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

#include "bregvr/solver.h"

#include <chrono>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "bregvr/errors.h"

namespace bregvr {
namespace {

void check_bounded(const SaddleProblem& problem, const Vector& x,
                   const Vector& v) {
  if (!x.allFinite() || !v.allFinite())
    throw DivergenceError("iterate became non-finite");
  const double norm = problem.product_norm(x, v);
  if (norm > kDivergenceThreshold) {
    throw DivergenceError("iterate norm " + std::to_string(norm) +
                          " exceeds 1e12");
  }
}

}  // namespace

std::string_view to_string(WeightSchedule schedule) {
  return schedule == WeightSchedule::kUniformAverage ? "uniform" : "geometric";
}

WeightSchedule weight_schedule_from_string(std::string_view name) {
  if (name == "uniform") return WeightSchedule::kUniformAverage;
  if (name == "geometric") return WeightSchedule::kGeometricAverage;
  throw ConfigError("unknown weight schedule '" + std::string(name) + "'");
}

void SolverConfig::validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw ConfigError("gamma must be positive and finite");
  if (theta != 0 && theta != 1) throw ConfigError("theta must be 0 or 1");
  if (m < 1) throw ConfigError("m must be a positive integer");
  if (stages < 0) throw ConfigError("stages must be nonnegative");
  if (weights == WeightSchedule::kGeometricAverage &&
      (!(tau > 0.0) || !std::isfinite(tau)))
    throw ConfigError("geometric weights need a positive finite tau");
  if (unsafe_override) return;
  if (weights == WeightSchedule::kUniformAverage && theta != 1)
    throw ConfigError("uniform averaging is certified only with theta = 1");
  if (weights == WeightSchedule::kGeometricAverage && theta != 0)
    throw ConfigError("geometric averaging is certified only with theta = 0");
}

std::vector<double> stage_weights(const SolverConfig& config) {
  const auto m = static_cast<std::size_t>(config.m);
  std::vector<double> w(m, 1.0 / static_cast<double>(m));
  if (config.weights == WeightSchedule::kGeometricAverage) {
    for (std::size_t k = 0; k < m; ++k)
      w[k] = std::pow(config.tau, static_cast<double>(k));
    const double delta = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& wk : w) wk /= delta;
  }
  return w;
}

void mirror_update(const SaddleProblem& problem, double gamma, const Vector& y,
                   const Vector& u, const Vector& z, const Vector& t,
                   StageState& state, double weight) {
  const CouplingOperator& k = problem.coupling();
  const Vector primal_point = problem.primal_geometry().grad(state.x_curr) -
                              gamma * z - gamma * k.adjoint_apply(u);
  const Vector dual_point = problem.dual_geometry().grad(state.v_curr) -
                            gamma * t + gamma * k.apply(y);
  Vector x_next =
      mirror_prox(problem.primal_geometry(), problem.f(), gamma, primal_point);
  Vector v_next = mirror_prox(problem.dual_geometry(), problem.g_star(), gamma,
                              dual_point);
  check_bounded(problem, x_next, v_next);

  if (weight != 0.0) {
    state.x_bar_accum += weight * x_next;
    state.v_bar_accum += weight * v_next;
  }
  state.x_prev = std::exchange(state.x_curr, std::move(x_next));
  state.v_prev = std::exchange(state.v_curr, std::move(v_next));
}

void inner_step(const SaddleProblem& problem, const SamplingScheme& scheme,
                const SolverConfig& config, StageState& state, double weight,
                Rng& rng) {
  const double theta = static_cast<double>(config.theta);
  const Vector y = state.x_curr + theta * (state.x_curr - state.x_prev);
  const Vector u = state.v_curr + theta * (state.v_curr - state.v_prev);

  const auto [i, j] = sample_pair(scheme, rng);
  const Vector z = estimate_primal(scheme, problem.h(), state.anchor, y, i);
  const Vector t = estimate_dual(scheme, problem.ell(), state.anchor, u, j);
  mirror_update(problem, config.gamma, y, u, z, t, state, weight);
}

StageCarry StageCarry::initial(const Vector& x_bar0, const Vector& v_bar0) {
  return StageCarry{x_bar0, x_bar0, v_bar0, v_bar0, x_bar0, v_bar0};
}

StageResult run_stage(const SaddleProblem& problem,
                      const SamplingScheme& scheme, const SolverConfig& config,
                      std::span<const double> weights, const StageCarry& carry,
                      Rng& rng) {
  if (weights.size() != static_cast<std::size_t>(config.m))
    throw ConfigError("run_stage: expected one weight per inner iteration");
  StageState state{
      carry.x_prev,
      carry.x0,
      carry.v_prev,
      carry.v0,
      Vector::Zero(problem.primal_dim()),
      Vector::Zero(problem.dual_dim()),
      AnchorState::at(problem, carry.x_bar, carry.v_bar),
  };

  StageResult result;
  for (int k = 0; k < config.m; ++k) {
    inner_step(problem, scheme, config, state, weights[k], rng);
    if (config.record_inner) {
      result.inner_x.push_back(state.x_curr);
      result.inner_v.push_back(state.v_curr);
    }
  }
  result.x_bar = state.x_bar_accum;
  result.v_bar = state.v_bar_accum;
  result.carry = StageCarry{std::move(state.x_curr), std::move(state.x_prev),
                            std::move(state.v_curr), std::move(state.v_prev),
                            result.x_bar,            result.v_bar};
  return result;
}

GapTrace solve(const SaddleProblem& problem, const SamplingScheme& scheme,
               const SolverConfig& config, const Vector& x_bar0,
               const Vector& v_bar0,
               const std::optional<SaddleReference>& saddle_ref,
               const StageSink& sink) {
  config.validate();
  problem.primal_geometry().check_interior(x_bar0);
  problem.dual_geometry().check_interior(v_bar0);

  const auto start = std::chrono::steady_clock::now();
  const std::vector<double> weights = stage_weights(config);
  StageCarry carry = StageCarry::initial(x_bar0, v_bar0);
  Rng rng(config.seed);

  GapTrace trace;
  trace.x_bar = x_bar0;
  trace.v_bar = v_bar0;
  trace.x_hat = x_bar0;
  trace.v_hat = v_bar0;
  Vector x_sum = Vector::Zero(problem.primal_dim());
  Vector v_sum = Vector::Zero(problem.dual_dim());

  for (int s = 1; s <= config.stages; ++s) {
    StageResult stage = run_stage(problem, scheme, config, weights, carry, rng);
    x_sum += stage.x_bar;
    v_sum += stage.v_bar;
    trace.x_hat = x_sum / static_cast<double>(s);
    trace.v_hat = v_sum / static_cast<double>(s);
    trace.x_bar = stage.x_bar;
    trace.v_bar = stage.v_bar;

    StageRecord record;
    record.stage = s;
    if (saddle_ref) {
      const Vector& xs = saddle_ref->x;
      const Vector& vs = saddle_ref->v;
      record.gap_pair =
          primal_dual_gap_pair(problem, stage.x_bar, stage.v_bar, xs, vs);
      record.ergodic_gap =
          primal_dual_gap_pair(problem, trace.x_hat, trace.v_hat, xs, vs);
      record.bregman_dist =
          problem.product_bregman(xs, vs, stage.x_bar, stage.v_bar);
    }
    record.wall_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    if (config.record_inner) {
      for (auto& x : stage.inner_x) trace.inner_x.push_back(std::move(x));
      for (auto& v : stage.inner_v) trace.inner_v.push_back(std::move(v));
    }
    trace.records.push_back(record);
    if (sink) sink(record);
    carry = std::move(stage.carry);
  }
  return trace;
}

}  // namespace bregvr
