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

// Acceptance criteria 1-9. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "bregvr/baselines.h"
#include "bregvr/certificates.h"
#include "bregvr/errors.h"
#include "bregvr/estimator.h"
#include "bregvr/experiment.h"
#include "bregvr/geometry.h"
#include "bregvr/instances.h"
#include "bregvr/problem.h"
#include "bregvr/random.h"
#include "bregvr/solver.h"

namespace bregvr {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// 1. Three-point and symmetric identities.
Outcome bregman_identities() {
  const auto start = Clock::now();
  double worst_three = 0.0;
  double worst_sym = 0.0;
  for (GeometryKind kind :
       {GeometryKind::kEuclidean, GeometryKind::kNegativeEntropy}) {
    const LegendreGeometry g(kind, 5);
    Rng rng(kind == GeometryKind::kEuclidean ? 101 : 102);
    const auto point = [&] {
      return kind == GeometryKind::kEuclidean ? rng.uniform_vector(5, -2, 2)
                                              : rng.dirichlet(5);
    };
    for (int it = 0; it < 100000; ++it) {
      const Vector x = point();
      const Vector p = point();
      const Vector z = point();
      const Vector gp = g.grad(p);
      const Vector gz = g.grad(z);
      const double dxz = g.bregman_distance(x, z);
      const double three = (x - p).dot(gz - gp) -
                           (g.bregman_distance(x, p) +
                            g.bregman_distance(p, z) - dxz);
      worst_three = std::max(worst_three, std::abs(three) / (1 + std::abs(dxz)));
      const double sym = (z - p).dot(gz - gp) -
                         (g.bregman_distance(z, p) + g.bregman_distance(p, z));
      worst_sym = std::max(worst_sym, std::abs(sym));
    }
  }
  const double secs = seconds_since(start);
  return {worst_three <= 1e-10 && worst_sym <= 1e-10 && secs < 5.0,
          fmt("max rel. three-point error %.2e, symmetric error %.2e, %.2f s",
              worst_three, worst_sym, secs)};
}

SaddleProblem random_sum_problem(std::size_t n, Rng& rng) {
  const Eigen::Index d = 3;
  std::vector<SmoothTerm> h, l;
  for (std::size_t i = 0; i < n; ++i) {
    Matrix a(2, d);
    for (Eigen::Index r = 0; r < a.size(); ++r) a.data()[r] = rng.uniform(-1, 1);
    h.push_back(SmoothTerm::affine_quadratic(a, rng.uniform_vector(2, -1, 1),
                                             rng.uniform_vector(d, -1, 1)));
    // Different scales so Lipschitz-proportional sampling is non-uniform.
    l.push_back(SmoothTerm::affine_quadratic(
        (1.0 + static_cast<double>(i)) * Matrix::Identity(d, d),
        rng.uniform_vector(d, -1, 1), Vector::Zero(d)));
  }
  const LegendreGeometry g(GeometryKind::kEuclidean, d);
  return SaddleProblem(g, g, FiniteSumSmooth(d, std::move(h)),
                       FiniteSumSmooth(d, std::move(l)), SimpleFunction::zero(),
                       SimpleFunction::zero(), Matrix::Identity(d, d));
}

// Exact mean and variance of both estimators over all indices.
struct Enumerated {
  Vector mean_z, mean_t;
  double var_z = 0.0, var_t = 0.0;
};

Enumerated enumerate(const SaddleProblem& p, const SamplingScheme& s,
                     const AnchorState& a, const Vector& y, const Vector& u) {
  Enumerated e{Vector::Zero(y.size()), Vector::Zero(u.size())};
  const Vector gh = p.h().gradient(y);
  const Vector gl = p.ell().gradient(u);
  for (std::size_t i = 0; i < p.h().count(); ++i) {
    const Vector z = estimate_primal(s, p.h(), a, y, i);
    e.mean_z += s.q()[i] * z;
    e.var_z += s.q()[i] * p.primal_geometry().dual_norm(z - gh) *
               p.primal_geometry().dual_norm(z - gh);
  }
  for (std::size_t j = 0; j < p.ell().count(); ++j) {
    const Vector t = estimate_dual(s, p.ell(), a, u, j);
    e.mean_t += s.q_prime()[j] * t;
    e.var_t += s.q_prime()[j] * p.dual_geometry().dual_norm(t - gl) *
               p.dual_geometry().dual_norm(t - gl);
  }
  return e;
}

// 2. Unbiasedness by enumeration; zero variance at the saddle anchor.
Outcome estimator_exactness() {
  double worst = 0.0;
  Rng rng(202);
  for (std::size_t n : {2u, 5u, 20u}) {
    const SaddleProblem p = random_sum_problem(n, rng);
    for (SamplingMode mode :
         {SamplingMode::kUniform, SamplingMode::kLipschitzProportional}) {
      const SamplingScheme s = make_scheme(p, mode);
      for (int it = 0; it < 1000; ++it) {
        const AnchorState a = AnchorState::at(p, rng.uniform_vector(3, -2, 2),
                                              rng.uniform_vector(3, -2, 2));
        const Vector y = rng.uniform_vector(3, -2, 2);
        const Vector u = rng.uniform_vector(3, -2, 2);
        const Enumerated e = enumerate(p, s, a, y, u);
        const double scale =
            1.0 + std::max(p.h().gradient(y).cwiseAbs().maxCoeff(),
                           p.ell().gradient(u).cwiseAbs().maxCoeff());
        worst = std::max(
            worst, (e.mean_z - p.h().gradient(y)).cwiseAbs().maxCoeff() / scale);
        worst = std::max(
            worst, (e.mean_t - p.ell().gradient(u)).cwiseAbs().maxCoeff() / scale);
      }
    }
  }
  const Instance in = make_builtin_instance("strongly-convex-quad");
  const SaddleOracle o = find_saddle(in.problem, OracleMethod::kAuto);
  double var_at_saddle = 0.0;
  for (SamplingMode mode :
       {SamplingMode::kUniform, SamplingMode::kLipschitzProportional}) {
    const SamplingScheme s = make_scheme(in.problem, mode);
    const Enumerated e = enumerate(in.problem, s,
                                   AnchorState::at(in.problem, o.x, o.v), o.x,
                                   o.v);
    var_at_saddle = std::max({var_at_saddle, e.var_z, e.var_t});
  }
  return {worst <= 1e-12 && var_at_saddle == 0.0,
          fmt("max mean error %.2e over n in {2,5,20}, variance at saddle %.1e",
              worst, var_at_saddle)};
}

// 3. Enumerated variance against 4 L1 (gap at iterate + gap at anchor).
Outcome variance_bound() {
  const Instance in = make_builtin_instance("strongly-convex-quad");
  const SaddleProblem& p = in.problem;
  const SaddleOracle o = find_saddle(p, OracleMethod::kAuto);
  const SamplingScheme s = make_scheme(p, SamplingMode::kUniform);
  const double l1 = s.l1();
  const double g_star = gap(p, o.x, o.v);
  Rng rng(303);
  double min_slack = std::numeric_limits<double>::infinity();
  double max_ratio = 0.0;
  for (int it = 0; it < 200; ++it) {
    // Radii spread over 10^-3 .. 1 around the saddle.
    const double r = std::pow(10.0, -rng.uniform(0, 3));
    const Vector xk = o.x + r * rng.uniform_vector(p.primal_dim(), -1, 1);
    const Vector vk = o.v + r * rng.uniform_vector(p.dual_dim(), -1, 1);
    const Vector xb = o.x + r * rng.uniform_vector(p.primal_dim(), -1, 1);
    const Vector vb = o.v + r * rng.uniform_vector(p.dual_dim(), -1, 1);
    // theta = 0: the query points are the iterates.
    const Enumerated e = enumerate(p, s, AnchorState::at(p, xb, vb), xk, vk);
    const double rhs_x = 4 * l1 * ((gap(p, xk, o.v) - g_star) +
                                   (gap(p, xb, o.v) - g_star));
    const double rhs_v = 4 * l1 * ((g_star - gap(p, o.x, vk)) +
                                   (g_star - gap(p, o.x, vb)));
    min_slack = std::min({min_slack, rhs_x - e.var_z, rhs_v - e.var_t});
    max_ratio = std::max({max_ratio, e.var_z / rhs_x, e.var_t / rhs_v});
  }
  return {min_slack >= -1e-9,
          fmt("min slack %.3e, max variance/bound %.3f over 200 states "
              "(L1 = %.4f)",
              min_slack, max_ratio, l1)};
}

// 4. n = n' = 1 stochastic run against the deterministic baseline.
Outcome collapse() {
  double worst = 0.0;
  for (const char* name : {"strongly-convex-quad", "rps-game", "lasso-saddle"}) {
    const Instance in = make_builtin_instance(name);
    const SaddleProblem view = in.problem.collapsed();
    const SamplingScheme s = make_scheme(view, SamplingMode::kUniform);
    const double gamma =
        0.9 * ergodic_step_supremum(CertificateConstants::from(view, s));
    SolverConfig c;
    c.gamma = gamma;
    c.theta = 1;
    c.m = 10;
    c.stages = 100;
    c.seed = 4;
    c.record_inner = true;
    const GapTrace t = solve(view, s, c, in.x0, in.v0);
    const DeterministicBaseline base(in.problem, gamma);
    StageState st = base.start(in.x0, in.v0);
    for (std::size_t k = 0; k < t.inner_x.size(); ++k) {
      base.step(st);
      worst = std::max({worst, (st.x_curr - t.inner_x[k]).cwiseAbs().maxCoeff(),
                        (st.v_curr - t.inner_v[k]).cwiseAbs().maxCoeff()});
    }
    if (t.inner_x.size() != 1000) return {false, "wrong inner step count"};
  }
  return {worst <= 1e-12,
          fmt("max coordinate deviation %.2e over 1000 steps on 3 instances",
              worst)};
}

ExperimentConfig experiment(const std::string& instance, int theta,
                            std::optional<int> m, int stages, int reps,
                            const fs::path& out) {
  ExperimentConfig c;
  c.instance = instance;
  c.theta = theta;
  c.m = m;
  c.stages = stages;
  c.replications = reps;
  c.output_dir = out;
  return c;
}

std::vector<double> column_means(const std::vector<TraceRow>& rows,
                                 int stages,
                                 double TraceRow::*field) {
  std::vector<double> mean(static_cast<std::size_t>(stages) + 1, 0.0);
  std::vector<int> count(mean.size(), 0);
  for (const TraceRow& r : rows) {
    mean[static_cast<std::size_t>(r.stage)] += r.*field;
    ++count[static_cast<std::size_t>(r.stage)];
  }
  for (std::size_t s = 1; s < mean.size(); ++s) mean[s] /= count[s];
  return mean;
}

// 5. Ergodic rate shape on entropy-game-20.
Outcome ergodic_shape(const fs::path& tmp) {
  const auto start = Clock::now();
  const int stages = 256;
  const ExperimentResult r = run_experiment(
      experiment("entropy-game-20", 1, 50, stages, 20, tmp / "c5"));
  const double secs = seconds_since(start);
  if (r.exit_code != kExitOk) return {false, "run failed: " + r.message};
  if (!r.summary["certificate"]["valid"].get<bool>())
    return {false, "certificate not valid"};
  const std::vector<double> mean =
      column_means(r.rows, stages, &TraceRow::ergodic_gap);
  double worst_ratio = 0.0;
  for (int n : {16, 32, 64, 128})
    worst_ratio = std::max(worst_ratio, mean[2 * n] / mean[n]);
  double worst_bound = 0.0;
  for (const TraceRow& row : r.rows) {
    const double b = row.bound;
    worst_bound = std::max(worst_bound, mean[row.stage] / (1.2 * b));
  }
  return {worst_ratio <= 0.65 && worst_bound <= 1.0 && secs < 120.0,
          fmt("max mean_gap(2N)/mean_gap(N) %.3f, max mean/(1.2 bound) %.2e, "
              "%.1f s",
              worst_ratio, worst_bound, secs)};
}

// 6. Linear rate shape on strongly-convex-quad.
Outcome linear_shape(const fs::path& tmp) {
  const auto start = Clock::now();
  const int stages = 30;
  const ExperimentResult r = run_experiment(
      experiment("strongly-convex-quad", 0, std::nullopt, stages, 50,
                 tmp / "c6"));
  const double secs = seconds_since(start);
  if (r.exit_code != kExitOk) return {false, "run failed: " + r.message};
  const Json& lin = r.summary["certificate"]["linear"];
  if (!r.summary["certificate"]["valid"].get<bool>())
    return {false, "certificate not valid"};
  const double lambda = lin["lambda"].get<double>();
  if (r.summary["config"]["m"].get<int>() != lin["m_min"].get<int>())
    return {false, "m differs from m_min"};
  const std::vector<double> mean =
      column_means(r.rows, stages, &TraceRow::gap_pair);
  double worst_ratio = 0.0;
  for (int s = 5; s <= 25; ++s)
    worst_ratio = std::max(worst_ratio, mean[s + 1] / mean[s]);
  double worst_bound = 0.0;
  for (const TraceRow& row : r.rows)
    worst_bound = std::max(worst_bound, mean[row.stage] / (1.2 * row.bound));
  return {worst_ratio <= 1 / lambda + 0.1 && worst_bound <= 1.0 && secs < 120.0,
          fmt("max ratio %.3f (limit %.3f), max mean/(1.2 bound) %.2e",
              worst_ratio, 1 / lambda + 0.1, worst_bound) +
              fmt(", %.2f s", secs)};
}

// 7. Certificate arithmetic.
Outcome certificate_arithmetic() {
  const LinearCertificate c =
      certify_linear(CertificateConstants{1.0, 0.0, 0.0, 0.0, 1.0}, 0.1);
  const bool ok = c.alpha_prime == 1.0 && std::abs(c.tau - 1.1) <= 1e-12 &&
                  std::abs(c.eta - 0.04) <= 1e-12 &&
                  std::abs(c.lambda - 1.4) <= 1e-12 && c.m_min == 4;
  return {ok, fmt("tau %.15g, eta %.15g, lambda %.15g", c.tau, c.eta,
                  c.lambda) +
                  ", m_min " + std::to_string(c.m_min)};
}

// 8. Oracle residuals.
Outcome oracle_residuals() {
  double worst = 0.0;
  std::string methods;
  for (const std::string& name : builtin_instance_names()) {
    try {
      const SaddleOracle o =
          find_saddle(make_builtin_instance(name).problem, OracleMethod::kAuto);
      worst = std::max(worst, o.residual);
      methods += " " + name + "=" + std::string(to_string(o.method));
    } catch (const Error& e) {
      return {false, name + ": " + e.what()};
    }
  }
  return {worst <= 1e-8, fmt("max residual %.2e;", worst) + methods};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// 9. Two CLI runs with the same config.
Outcome determinism(const fs::path& tmp) {
  const fs::path cfg = fs::path(BREGVR_SOURCE_DIR) / "configs";
  std::vector<std::string> traces;
  for (const char* dir : {"c9a", "c9b"}) {
    for (const char* config : {"entropy-game-20.toml", "strongly-convex-quad.toml"}) {
      const fs::path out = tmp / dir / config;
      const std::string cmd = std::string(BREGVR_CLI_PATH) + " run --config " +
                              (cfg / config).string() +
                              " --stages 16 --output " + out.string() +
                              " >/dev/null 2>&1";
      const int status = std::system(cmd.c_str());
      if (!WIFEXITED(status) || WEXITSTATUS(status) != 0)
        return {false, std::string("run failed for ") + config};
      traces.push_back(slurp(out / "trace.csv"));
    }
  }
  const bool same = traces[0] == traces[2] && traces[1] == traces[3] &&
                    !traces[0].empty();
  return {same, same ? "trace.csv byte-identical for two configs"
                     : "trace.csv differs between runs"};
}

}  // namespace
}  // namespace bregvr

int main() {
  namespace fs = std::filesystem;
  const fs::path tmp = fs::temp_directory_path() / "bregvr_acceptance";
  fs::remove_all(tmp);
  fs::create_directories(tmp);

  const std::vector<std::pair<const char*, std::function<bregvr::Outcome()>>>
      criteria = {
          {"Bregman identities", bregvr::bregman_identities},
          {"estimator exactness", bregvr::estimator_exactness},
          {"variance bound", bregvr::variance_bound},
          {"collapse equivalence", bregvr::collapse},
          {"ergodic rate shape", [&] { return bregvr::ergodic_shape(tmp); }},
          {"linear rate shape", [&] { return bregvr::linear_shape(tmp); }},
          {"certificate arithmetic", bregvr::certificate_arithmetic},
          {"oracle residuals", bregvr::oracle_residuals},
          {"determinism", [&] { return bregvr::determinism(tmp); }},
      };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    bregvr::Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  fs::remove_all(tmp);
  return failed == 0 ? 0 : 1;
}
