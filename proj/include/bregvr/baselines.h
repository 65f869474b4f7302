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

// Comparison methods and saddle-point oracles.

#ifndef BREGVR_BASELINES_H_
#define BREGVR_BASELINES_H_

#include <cstdint>
#include <optional>
#include <string_view>

#include "bregvr/estimator.h"
#include "bregvr/problem.h"
#include "bregvr/random.h"
#include "bregvr/solver.h"
#include "bregvr/types.h"

namespace bregvr {

// Deterministic primal-dual method (theta = 1, exact gradients). It runs the
// solver's inner_step on the single-term view of the problem, where the
// sampling is degenerate and the estimators equal the full gradients.
class DeterministicBaseline {
 public:
  DeterministicBaseline(const SaddleProblem& problem, double gamma);

  const SaddleProblem& view() const { return view_; }
  double gamma() const { return config_.gamma; }

  // x_{-1} = x_0, v_{-1} = v_0, anchored at (x0, v0).
  StageState start(const Vector& x0, const Vector& v0) const;
  void step(StageState& state) const;

 private:
  SaddleProblem view_;
  SamplingScheme scheme_;
  SolverConfig config_;
};

// One deterministic step on `problem`, reusing the anchor stored in `state`.
StageState deterministic_step(const SaddleProblem& problem, double gamma,
                              const StageState& state);

// Primal-dual step with the plain single-term estimators
// z = grad h_i(y) / (q_i n), t = grad l_j(u) / (q'_j n') and step gamma_k.
// Only uniform schemes are accepted.
void plain_sgd_step(const SaddleProblem& problem, const SamplingScheme& scheme,
                    double gamma_k, StageState& state, Rng& rng,
                    int theta = 1);

enum class OracleMethod { kClosedForm, kHighAccuracyDeterministic, kAuto };

std::string_view to_string(OracleMethod method);
OracleMethod oracle_method_from_string(std::string_view name);

struct SaddleOracle {
  OracleMethod method = OracleMethod::kClosedForm;
  Vector x;
  Vector v;
  // Largest violation of G(x*, v) <= G(x*, v*) <= G(x, v*) over the probes.
  double residual = 0.0;
  std::int64_t iterations = 0;
};

struct OracleOptions {
  int probes = 10000;
  std::uint64_t probe_seed = 0x5eed;
  double max_residual = 1e-8;
  std::int64_t max_iterations = 2000000;
  // Stop when (|x_{k+1} - x_k| + |v_{k+1} - v_k|) / gamma falls below this.
  double fixed_point_tolerance = 1e-13;
  // Starting point of the deterministic run; default_start when unset.
  std::optional<Vector> x_start;
  std::optional<Vector> v_start;
};

// Closed forms: Euclidean quadratic problems (f, g* zero or scaled geometry,
// solved through the optimality linear system) and matrix games with
// constant row and column sums (uniform strategies). kAuto tries the closed
// form first. Throws OracleFailure when no method applies or the residual
// exceeds options.max_residual.
SaddleOracle find_saddle(const SaddleProblem& problem, OracleMethod method,
                         const OracleOptions& options = {});

// Max saddle-inequality violation at (x*, v*) over random feasible probes:
// simplex points from Dirichlet(1), box points uniformly, unconstrained
// Euclidean points uniformly within distance 1 per coordinate of the
// candidate.
double saddle_residual(const SaddleProblem& problem, const Vector& x_star,
                       const Vector& v_star, int probes, std::uint64_t seed);

// A feasible interior starting point for the primal or dual side.
Vector default_start(const LegendreGeometry& geom, const SimpleFunction& fn);

}  // namespace bregvr

#endif  // BREGVR_BASELINES_H_
