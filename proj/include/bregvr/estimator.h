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

// Importance-sampled, anchor-corrected gradient estimators.
//
// With an anchor xbar whose full gradient is cached, the primal estimator is
//
//   z = (grad h_i(y) - grad h_i(xbar)) / (q_i n) + grad h(xbar),   i ~ q,
//
// which is unbiased for grad h(y) and whose variance vanishes as y and xbar
// approach the solution. The dual estimator is the same construction on l.

#ifndef BREGVR_ESTIMATOR_H_
#define BREGVR_ESTIMATOR_H_

#include <cstddef>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "bregvr/problem.h"
#include "bregvr/random.h"
#include "bregvr/types.h"

namespace bregvr {

enum class SamplingMode { kUniform, kLipschitzProportional };

std::string_view to_string(SamplingMode mode);
SamplingMode sampling_mode_from_string(std::string_view name);

class SamplingScheme {
 public:
  // Custom probabilities. Every entry must be > 0 and each vector must sum to
  // 1 within 1e-12.
  SamplingScheme(std::vector<double> q, std::vector<double> q_prime,
                 std::span<const double> mu, std::span<const double> nu);

  const std::vector<double>& q() const { return q_; }
  const std::vector<double>& q_prime() const { return q_prime_; }

  // max_i mu_i / (q_i n) and max_j nu_j / (q'_j n').
  double l_q() const { return l_q_; }
  double l_q_prime() const { return l_q_prime_; }
  double l1() const { return l1_; }
  // max over both sums of mu_i^2 / (q_i n), nu_j^2 / (q'_j n').
  double l2() const { return l2_; }

  bool is_uniform() const { return uniform_; }

  // Inverse-CDF lookups for a uniform draw u in [0, 1). Indices are 0-based.
  std::size_t primal_index(double u) const;
  std::size_t dual_index(double u) const;

 private:
  std::vector<double> q_;
  std::vector<double> q_prime_;
  std::vector<double> cumulative_;
  std::vector<double> cumulative_prime_;
  double l_q_ = 0.0;
  double l_q_prime_ = 0.0;
  double l1_ = 0.0;
  double l2_ = 0.0;
  bool uniform_ = false;
};

// Uniform sets q_i = 1/n. LipschitzProportional sets q_i = mu_i / sum mu_j,
// falling back to uniform for a sum whose constants are all zero.
SamplingScheme make_scheme(const SaddleProblem& problem, SamplingMode mode);

// Draws i ~ Q then j ~ Q' from the single stream, in that order.
std::pair<std::size_t, std::size_t> sample_pair(const SamplingScheme& scheme,
                                                Rng& rng);

// Stage reference point and its cached full gradients.
struct AnchorState {
  Vector x_bar;
  Vector v_bar;
  Vector grad_h_bar;
  Vector grad_ell_bar;

  static AnchorState at(const SaddleProblem& problem, Vector x_bar,
                        Vector v_bar);
};

Vector estimate_primal(const SamplingScheme& scheme, const FiniteSumSmooth& h,
                       const AnchorState& anchor, const Vector& y,
                       std::size_t i);

Vector estimate_dual(const SamplingScheme& scheme, const FiniteSumSmooth& ell,
                     const AnchorState& anchor, const Vector& u,
                     std::size_t j);

}  // namespace bregvr

#endif  // BREGVR_ESTIMATOR_H_
