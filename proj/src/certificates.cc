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

#include "bregvr/certificates.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bregvr/errors.h"

namespace bregvr {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

CertificateConstants CertificateConstants::from(const SaddleProblem& problem,
                                                const SamplingScheme& scheme) {
  return CertificateConstants{scheme.l1(), scheme.l2(), problem.mu0(),
                              problem.coupling().norm(), problem.alpha()};
}

double ErgodicCertificate::denominator() const {
  return static_cast<double>(m) * gamma * (1.0 - 12.0 * l1 * gamma);
}

std::optional<double> ErgodicCertificate::bound_constant() const {
  if (!initial) return std::nullopt;
  return initial->distance +
         4.0 * l1 * gamma * gamma * static_cast<double>(m + 2) * initial->gap;
}

double ErgodicCertificate::bound(int n) const {
  const auto numerator = bound_constant();
  if (!numerator)
    throw ConfigError("ergodic bound needs the initial distance and gap");
  if (n <= 0) throw ConfigError("ergodic bound is defined for N >= 1");
  return *numerator / (denominator() * static_cast<double>(n));
}

ErgodicCertificate certify_ergodic(const CertificateConstants& c, double gamma,
                                   int m, std::optional<InitialTerms> initial) {
  ErgodicCertificate cert;
  cert.l1 = c.l1;
  cert.l2 = c.l2;
  cert.mu0 = c.mu0;
  cert.k_norm = c.k_norm;
  cert.gamma = gamma;
  cert.m = m;
  cert.cond_a_lhs = 12.0 * gamma * c.l1;
  cert.cond_b_lhs =
      4.0 * gamma * c.mu0 + 2.0 * gamma * c.k_norm + 8.0 * c.l2 * gamma * gamma;
  cert.cond_a = cert.cond_a_lhs < 1.0;
  cert.cond_b = cert.cond_b_lhs <= 1.0;
  cert.initial = initial;
  return cert;
}

ErgodicCertificate certify_ergodic(const SaddleProblem& problem,
                                   const SamplingScheme& scheme, double gamma,
                                   int m, std::optional<InitialTerms> initial) {
  return certify_ergodic(CertificateConstants::from(problem, scheme), gamma, m,
                         initial);
}

double ergodic_step_supremum(const CertificateConstants& c) {
  const double from_a = c.l1 > 0.0 ? 1.0 / (12.0 * c.l1) : kInf;
  const double b = 4.0 * c.mu0 + 2.0 * c.k_norm;
  double from_b = kInf;
  if (c.l2 > 0.0) {
    from_b = (-b + std::sqrt(b * b + 32.0 * c.l2)) / (16.0 * c.l2);
  } else if (b > 0.0) {
    from_b = 1.0 / b;
  }
  return std::min(from_a, from_b);
}

double default_m_prime(const CertificateConstants& c) {
  if (c.k_norm == 0.0) return 1.0;
  return 4.0 * c.k_norm / c.alpha;
}

int minimal_epoch_length(double lambda, double tau) {
  if (!(lambda > 1.0)) return 1;
  const double ratio = std::log(lambda) / std::log(tau);
  if (!std::isfinite(ratio) ||
      ratio >= static_cast<double>(std::numeric_limits<int>::max() - 1))
    return std::numeric_limits<int>::max();
  return std::max(1, static_cast<int>(std::floor(ratio)) + 1);
}

bool LinearCertificate::valid() const {
  if (!step_ok || !(lambda > 1.0)) return false;
  return !m || *m >= m_min;
}

std::optional<double> LinearCertificate::prefactor() const {
  if (!initial || !delta) return std::nullopt;
  if (eta == 0.0) return kInf;
  return (initial->distance + eta * (1.0 + *delta) * initial->gap) /
         (eta * *delta);
}

double LinearCertificate::bound(int s) const {
  const auto pre = prefactor();
  if (!pre)
    throw ConfigError("linear bound needs m and the initial distance and gap");
  if (!std::isfinite(*pre)) return kInf;
  return std::pow(lambda, -static_cast<double>(s)) * *pre;
}

LinearCertificate certify_linear(const CertificateConstants& c, double gamma,
                                 std::optional<double> m_prime,
                                 std::optional<int> m,
                                 std::optional<InitialTerms> initial) {
  if (!(c.alpha > 0.0)) {
    throw ConfigError(
        "linear certificate needs relative strong convexity alpha > 0");
  }
  LinearCertificate cert;
  cert.l1 = c.l1;
  cert.mu0 = c.mu0;
  cert.k_norm = c.k_norm;
  cert.alpha = c.alpha;
  cert.gamma = gamma;
  cert.m_prime = m_prime.value_or(default_m_prime(c));
  if (!(cert.m_prime > 0.0) || cert.m_prime <= 2.0 * c.k_norm / c.alpha) {
    throw ConfigError("M' must exceed 2|K|/alpha = " +
                      std::to_string(2.0 * c.k_norm / c.alpha));
  }
  cert.alpha_prime = c.alpha - 2.0 * c.k_norm / cert.m_prime;

  const double coupling_den = 2.0 * c.k_norm * cert.m_prime + c.mu0;
  cert.gamma_max_coupling = coupling_den > 0.0 ? 1.0 / coupling_den : kInf;
  cert.gamma_max_variance =
      c.l1 > 0.0 ? (-1.0 + std::sqrt(1.0 + cert.alpha_prime / (4.0 * c.l1))) /
                       cert.alpha_prime
                 : kInf;
  cert.gamma_max = std::min(cert.gamma_max_coupling, cert.gamma_max_variance);
  cert.step_ok = gamma > 0.0 && gamma < cert.gamma_max;

  cert.tau = 1.0 + gamma * cert.alpha_prime;
  cert.eta = 4.0 * gamma * gamma * c.l1;
  cert.lambda = cert.eta > 0.0 ? (gamma - cert.eta * cert.tau) / cert.eta
                               : kInf;
  cert.m_min = cert.eta > 0.0 ? minimal_epoch_length(cert.lambda, cert.tau) : 1;

  if (m) {
    if (*m < 1) throw ConfigError("m must be a positive integer");
    cert.m = m;
    cert.weights.resize(static_cast<std::size_t>(*m));
    double delta = 0.0;
    for (int k = 0; k < *m; ++k) {
      cert.weights[static_cast<std::size_t>(k)] =
          std::pow(cert.tau, static_cast<double>(k));
      delta += cert.weights[static_cast<std::size_t>(k)];
    }
    for (double& w : cert.weights) w /= delta;
    cert.delta = delta;
  }
  cert.initial = initial;
  return cert;
}

LinearCertificate certify_linear(const SaddleProblem& problem,
                                 const SamplingScheme& scheme, double gamma,
                                 std::optional<double> m_prime,
                                 std::optional<int> m,
                                 std::optional<InitialTerms> initial) {
  return certify_linear(CertificateConstants::from(problem, scheme), gamma,
                        m_prime, m, initial);
}

std::vector<std::pair<int, double>> theoretical_bound_curve(
    const ErgodicCertificate& cert, const std::vector<int>& indices) {
  std::vector<std::pair<int, double>> out;
  out.reserve(indices.size());
  for (int n : indices) out.emplace_back(n, cert.bound(n));
  return out;
}

std::vector<std::pair<int, double>> theoretical_bound_curve(
    const LinearCertificate& cert, const std::vector<int>& indices) {
  std::vector<std::pair<int, double>> out;
  out.reserve(indices.size());
  for (int s : indices) out.emplace_back(s, cert.bound(s));
  return out;
}

}  // namespace bregvr
