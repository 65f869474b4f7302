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

#include "bregvr/estimator.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "bregvr/errors.h"

namespace bregvr {
namespace {

constexpr double kProbabilitySumTolerance = 1e-12;

void validate_probabilities(const std::vector<double>& q, std::size_t count,
                            const char* name) {
  if (q.size() != count) {
    throw ConfigError(std::string(name) + ": expected " +
                      std::to_string(count) + " probabilities");
  }
  for (double qi : q) {
    if (!(qi > 0.0) || !std::isfinite(qi))
      throw ConfigError(std::string(name) + ": probabilities must be > 0");
  }
  const double total = std::accumulate(q.begin(), q.end(), 0.0);
  if (std::abs(total - 1.0) > kProbabilitySumTolerance)
    throw ConfigError(std::string(name) + ": probabilities must sum to 1");
}

std::vector<double> prefix_sums(const std::vector<double>& q) {
  std::vector<double> out(q.size());
  std::partial_sum(q.begin(), q.end(), out.begin());
  return out;
}

std::size_t inverse_cdf(const std::vector<double>& cumulative, double u) {
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  // The last prefix sum can round below 1.
  if (it == cumulative.end()) return cumulative.size() - 1;
  return static_cast<std::size_t>(it - cumulative.begin());
}

std::vector<double> scheme_probabilities(std::span<const double> lipschitz,
                                         SamplingMode mode) {
  const std::size_t n = lipschitz.size();
  const double total = std::accumulate(lipschitz.begin(), lipschitz.end(), 0.0);
  std::vector<double> q(n, 1.0 / static_cast<double>(n));
  if (mode == SamplingMode::kLipschitzProportional && total > 0.0) {
    const bool any_zero = std::any_of(lipschitz.begin(), lipschitz.end(),
                                      [](double mu) { return mu <= 0.0; });
    // Zero constants would give zero probability; keep uniform then.
    if (!any_zero) {
      for (std::size_t i = 0; i < n; ++i) q[i] = lipschitz[i] / total;
    }
  }
  return q;
}

Vector estimate(const std::vector<double>& q, const FiniteSumSmooth& fn, const Vector& anchor_point,
                const Vector& anchor_grad, const Vector& query,
                std::size_t index) {
  const double scale = 1.0 / (q.at(index) * static_cast<double>(fn.count()));
  return scale * (fn.term_gradient(index, query) -
                  fn.term_gradient(index, anchor_point)) +
         anchor_grad;
}

}  // namespace

std::string_view to_string(SamplingMode mode) {
  return mode == SamplingMode::kUniform ? "uniform" : "lipschitz";
}

SamplingMode sampling_mode_from_string(std::string_view name) {
  if (name == "uniform") return SamplingMode::kUniform;
  if (name == "lipschitz" || name == "lipschitz_proportional")
    return SamplingMode::kLipschitzProportional;
  throw ConfigError("unknown sampling mode '" + std::string(name) + "'");
}

SamplingScheme::SamplingScheme(std::vector<double> q,
                               std::vector<double> q_prime,
                               std::span<const double> mu,
                               std::span<const double> nu)
    : q_(std::move(q)), q_prime_(std::move(q_prime)) {
  validate_probabilities(q_, mu.size(), "Q");
  validate_probabilities(q_prime_, nu.size(), "Q'");
  cumulative_ = prefix_sums(q_);
  cumulative_prime_ = prefix_sums(q_prime_);

  const double n = static_cast<double>(mu.size());
  const double n_prime = static_cast<double>(nu.size());
  double l2 = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    l_q_ = std::max(l_q_, mu[i] / (q_[i] * n));
    l2 = std::max(l2, mu[i] * mu[i] / (q_[i] * n));
  }
  for (std::size_t j = 0; j < nu.size(); ++j) {
    l_q_prime_ = std::max(l_q_prime_, nu[j] / (q_prime_[j] * n_prime));
    l2 = std::max(l2, nu[j] * nu[j] / (q_prime_[j] * n_prime));
  }
  l1_ = std::max(l_q_, l_q_prime_);
  l2_ = l2;

  const auto all_equal = [](const std::vector<double>& p) {
    return std::all_of(p.begin(), p.end(),
                       [&](double pi) { return pi == p.front(); });
  };
  uniform_ = all_equal(q_) && all_equal(q_prime_);
}

std::size_t SamplingScheme::primal_index(double u) const {
  return inverse_cdf(cumulative_, u);
}

std::size_t SamplingScheme::dual_index(double u) const {
  return inverse_cdf(cumulative_prime_, u);
}

SamplingScheme make_scheme(const SaddleProblem& problem, SamplingMode mode) {
  const auto mu = problem.h().lipschitz();
  const auto nu = problem.ell().lipschitz();
  return SamplingScheme(scheme_probabilities(mu, mode),
                        scheme_probabilities(nu, mode), mu, nu);
}

std::pair<std::size_t, std::size_t> sample_pair(const SamplingScheme& scheme,
                                                Rng& rng) {
  const std::size_t i = scheme.primal_index(rng.uniform());
  const std::size_t j = scheme.dual_index(rng.uniform());
  return {i, j};
}

AnchorState AnchorState::at(const SaddleProblem& problem, Vector x_bar,
                            Vector v_bar) {
  auto [gh, gl] = full_gradients(problem, x_bar, v_bar);
  return AnchorState{std::move(x_bar), std::move(v_bar), std::move(gh),
                     std::move(gl)};
}

Vector estimate_primal(const SamplingScheme& scheme, const FiniteSumSmooth& h,
                       const AnchorState& anchor, const Vector& y,
                       std::size_t i) {
  return estimate(scheme.q(), h, anchor.x_bar, anchor.grad_h_bar, y,
                  i);
}

Vector estimate_dual(const SamplingScheme& scheme, const FiniteSumSmooth& ell,
                     const AnchorState& anchor, const Vector& u,
                     std::size_t j) {
  return estimate(scheme.q_prime(), ell, anchor.v_bar,
                  anchor.grad_ell_bar, u, j);
}

}  // namespace bregvr
