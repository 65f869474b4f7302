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

// Step-size conditions and rate bounds for the two convergence regimes.
//
// Ergodic regime (theta = 1, w_k = 1/m, merely convex): valid when
//   12 gamma L1 < 1   and   4 gamma mu0 + 2 gamma |K| + 8 L2 gamma^2 <= 1,
// and then
//   E[gap(xhat_N, vhat_N)] <= (D0 + 4 L1 gamma^2 (m+2) gap0)
//                             / (m gamma (1 - 12 L1 gamma) N).
//
// Linear regime (theta = 0, w_k = tau^(k-1)/delta, alpha > 0): with
//   alpha' = alpha - 2|K|/M', tau = 1 + gamma alpha', eta = 4 gamma^2 L1,
//   delta = sum_{k=1..m} tau^(k-1), lambda = (gamma - eta tau) / eta,
// valid when 0 < gamma < min{1/(2|K|M' + mu0), (-1 + sqrt(1 + alpha'/(4 L1)))/alpha'}
// and m > ln(lambda)/ln(tau); then
//   E[gap(xbar_s, vbar_s)] <= lambda^(-s)/(eta delta) (D0 + eta (1+delta) gap0).
//
// Inequalities are evaluated verbatim in double precision with no slack.

#ifndef BREGVR_CERTIFICATES_H_
#define BREGVR_CERTIFICATES_H_

#include <optional>
#include <utility>
#include <vector>

#include "bregvr/estimator.h"
#include "bregvr/problem.h"

namespace bregvr {

// Problem and sampling constants entering both certificates.
struct CertificateConstants {
  double l1 = 0.0;
  double l2 = 0.0;
  double mu0 = 0.0;
  double k_norm = 0.0;
  double alpha = 0.0;

  static CertificateConstants from(const SaddleProblem& problem,
                                   const SamplingScheme& scheme);
};

// D((x*, v*), (xbar0, vbar0)) and G(xbar0, v*) - G(x*, vbar0).
struct InitialTerms {
  double distance = 0.0;
  double gap = 0.0;
};

struct ErgodicCertificate {
  double l1 = 0.0;
  double l2 = 0.0;
  double mu0 = 0.0;
  double k_norm = 0.0;
  double gamma = 0.0;
  int m = 0;
  bool cond_a = false;  // 12 gamma L1 < 1
  bool cond_b = false;  // 4 gamma mu0 + 2 gamma |K| + 8 L2 gamma^2 <= 1
  // Left-hand sides, reported alongside the booleans.
  double cond_a_lhs = 0.0;
  double cond_b_lhs = 0.0;
  std::optional<InitialTerms> initial;

  bool valid() const { return cond_a && cond_b && gamma > 0.0 && m >= 1; }
  // m gamma (1 - 12 L1 gamma).
  double denominator() const;
  // D0 + 4 L1 gamma^2 (m + 2) gap0; empty without initial terms.
  std::optional<double> bound_constant() const;
  // Bound on the ergodic gap after n stages. Requires initial terms.
  double bound(int n) const;
};

ErgodicCertificate certify_ergodic(const CertificateConstants& constants,
                                   double gamma, int m,
                                   std::optional<InitialTerms> initial = {});
ErgodicCertificate certify_ergodic(const SaddleProblem& problem,
                                   const SamplingScheme& scheme, double gamma,
                                   int m,
                                   std::optional<InitialTerms> initial = {});

// Largest gamma accepted by both ergodic conditions is the supremum of this
// half-open range; any gamma strictly below it is certified.
double ergodic_step_supremum(const CertificateConstants& constants);

struct LinearCertificate {
  double l1 = 0.0;
  double mu0 = 0.0;
  double k_norm = 0.0;
  double alpha = 0.0;
  double gamma = 0.0;
  double m_prime = 0.0;
  double alpha_prime = 0.0;
  double tau = 0.0;
  double eta = 0.0;
  double lambda = 0.0;
  // The two terms of the step bound and their minimum.
  double gamma_max_coupling = 0.0;
  double gamma_max_variance = 0.0;
  double gamma_max = 0.0;
  bool step_ok = false;  // 0 < gamma < gamma_max
  int m_min = 0;
  std::optional<int> m;
  std::optional<double> delta;
  std::vector<double> weights;
  std::optional<InitialTerms> initial;

  // lambda < 1.01: the bound barely contracts.
  bool near_degenerate() const { return lambda < kNearDegenerateLambda; }
  bool valid() const;
  // lambda^(-1), the certified contraction per stage.
  double rate() const { return 1.0 / lambda; }
  // (D0 + eta (1 + delta) gap0) / (eta delta). Requires m and initial terms.
  std::optional<double> prefactor() const;
  double bound(int s) const;

  static constexpr double kNearDegenerateLambda = 1.01;
};

// M' defaults to 4|K|/alpha (so alpha' = alpha/2), or 1 when K = 0. Throws
// ConfigError when alpha <= 0 or M' <= 2|K|/alpha.
LinearCertificate certify_linear(const CertificateConstants& constants,
                                 double gamma,
                                 std::optional<double> m_prime = {},
                                 std::optional<int> m = {},
                                 std::optional<InitialTerms> initial = {});
LinearCertificate certify_linear(const SaddleProblem& problem,
                                 const SamplingScheme& scheme, double gamma,
                                 std::optional<double> m_prime = {},
                                 std::optional<int> m = {},
                                 std::optional<InitialTerms> initial = {});

double default_m_prime(const CertificateConstants& constants);

// Smallest integer strictly greater than ln(lambda)/ln(tau), and at least 1.
int minimal_epoch_length(double lambda, double tau);

// Bound values at each index of `indices` (stage counts N for the ergodic
// certificate, stage numbers s for the linear one).
std::vector<std::pair<int, double>> theoretical_bound_curve(
    const ErgodicCertificate& cert, const std::vector<int>& indices);
std::vector<std::pair<int, double>> theoretical_bound_curve(
    const LinearCertificate& cert, const std::vector<int>& indices);

}  // namespace bregvr

#endif  // BREGVR_CERTIFICATES_H_
