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

// Stochastic variance-reduced primal-dual splitting with Bregman steps.
//
// Each stage fixes an anchor (xbar, vbar) with cached full gradients and runs
// m inner iterations
//
//   y_k     = x_k + theta (x_k - x_{k-1})
//   u_k     = v_k + theta (v_k - v_{k-1})
//   x_{k+1} = (grad phi + gamma df)^{-1}  (grad phi(x_k) - gamma z_k - gamma K^T u_k)
//   v_{k+1} = (grad psi + gamma dg*)^{-1} (grad psi(v_k) - gamma t_k + gamma K y_k)
//
// with z_k, t_k the anchor-corrected estimators. The next anchor is the
// weighted average sum_{k=1..m} w_k x_k, and the next stage starts from
// (x_m, x_{m-1}).

#ifndef BREGVR_SOLVER_H_
#define BREGVR_SOLVER_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "bregvr/estimator.h"
#include "bregvr/problem.h"
#include "bregvr/random.h"
#include "bregvr/types.h"

namespace bregvr {

enum class WeightSchedule {
  kUniformAverage,    // w_k = 1/m, paired with theta = 1
  kGeometricAverage,  // w_k = tau^(k-1) / delta, paired with theta = 0
};

std::string_view to_string(WeightSchedule schedule);
WeightSchedule weight_schedule_from_string(std::string_view name);

struct SolverConfig {
  double gamma = 0.0;
  int theta = 1;
  int m = 1;
  int stages = 0;
  WeightSchedule weights = WeightSchedule::kUniformAverage;
  // Ratio of the geometric schedule (usually tau = 1 + gamma alpha' from the
  // linear-rate certificate). Ignored for the uniform schedule.
  double tau = 1.0;
  std::uint64_t seed = 0;
  bool record_inner = false;
  // Accept theta/weights pairings outside the certified ones.
  bool unsafe_override = false;

  // Throws ConfigError.
  void validate() const;
};

// w_1, ..., w_m. Sums to 1 within 1e-12.
std::vector<double> stage_weights(const SolverConfig& config);

// Iterates of the current stage plus the running weighted sums that become
// the next anchor.
struct StageState {
  Vector x_prev;
  Vector x_curr;
  Vector v_prev;
  Vector v_curr;
  Vector x_bar_accum;
  Vector v_bar_accum;
  AnchorState anchor;
};

// Largest admitted product norm of an iterate.
inline constexpr double kDivergenceThreshold = 1e12;

// Both mirror steps from the extrapolated points (y, u) and the gradient
// estimates (z, t); adds weight * (x_{k+1}, v_{k+1}) to the accumulators and
// shifts the iterate pairs. Throws DivergenceError on unbounded iterates.
void mirror_update(const SaddleProblem& problem, double gamma, const Vector& y,
                   const Vector& u, const Vector& z, const Vector& t,
                   StageState& state, double weight);

// One inner iteration; adds weight * (x_{k+1}, v_{k+1}) to the accumulators.
void inner_step(const SaddleProblem& problem, const SamplingScheme& scheme,
                const SolverConfig& config, StageState& state, double weight,
                Rng& rng);

// Warm start handed from one stage to the next.
struct StageCarry {
  Vector x0;
  Vector x_prev;
  Vector v0;
  Vector v_prev;
  Vector x_bar;
  Vector v_bar;

  static StageCarry initial(const Vector& x_bar0, const Vector& v_bar0);
};

struct StageResult {
  StageCarry carry;
  Vector x_bar;
  Vector v_bar;
  // x_1..x_m and v_1..v_m when config.record_inner is set.
  std::vector<Vector> inner_x;
  std::vector<Vector> inner_v;
};

StageResult run_stage(const SaddleProblem& problem,
                      const SamplingScheme& scheme, const SolverConfig& config,
                      std::span<const double> weights, const StageCarry& carry,
                      Rng& rng);

struct SaddleReference {
  Vector x;
  Vector v;
};

struct StageRecord {
  int stage = 0;
  // G(xbar_s, v*) - G(x*, vbar_s).
  std::optional<double> gap_pair;
  // Same quantity at the running averages of xbar_1..xbar_s.
  std::optional<double> ergodic_gap;
  // D((x*, v*), (xbar_s, vbar_s)).
  std::optional<double> bregman_dist;
  // Elapsed time since the start of the run.
  double wall_ms = 0.0;
};

struct GapTrace {
  std::vector<StageRecord> records;
  Vector x_bar;
  Vector v_bar;
  Vector x_hat;
  Vector v_hat;
  std::vector<Vector> inner_x;
  std::vector<Vector> inner_v;
};

// Receives each record as soon as its stage completes, so a caller keeps the
// trace prefix when a later stage throws.
using StageSink = std::function<void(const StageRecord&)>;

GapTrace solve(const SaddleProblem& problem, const SamplingScheme& scheme,
               const SolverConfig& config, const Vector& x_bar0,
               const Vector& v_bar0,
               const std::optional<SaddleReference>& saddle_ref = std::nullopt,
               const StageSink& sink = {});

}  // namespace bregvr

#endif  // BREGVR_SOLVER_H_
