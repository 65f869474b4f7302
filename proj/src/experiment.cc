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

#include "bregvr/experiment.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "bregvr/errors.h"
#include "toml.hpp"

namespace bregvr {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Default step as a fraction of the certified supremum.
constexpr double kDefaultStepFraction = 0.9;

// ---- TOML helpers ----------------------------------------------------------

[[noreturn]] void bad_type(std::string_view key, std::string_view want) {
  throw ConfigError("config key '" + std::string(key) + "' must be " +
                    std::string(want));
}

double as_double(const toml::node& node, std::string_view key) {
  if (const auto* f = node.as_floating_point()) return f->get();
  if (const auto* i = node.as_integer()) return static_cast<double>(i->get());
  bad_type(key, "a number");
}

std::int64_t as_int(const toml::node& node, std::string_view key) {
  if (const auto* i = node.as_integer()) return i->get();
  bad_type(key, "an integer");
}

bool as_bool(const toml::node& node, std::string_view key) {
  if (const auto* b = node.as_boolean()) return b->get();
  bad_type(key, "a boolean");
}

std::string as_string(const toml::node& node, std::string_view key) {
  if (const auto* s = node.as_string()) return s->get();
  bad_type(key, "a string");
}

void check_keys(const toml::table& table, const std::set<std::string>& known,
                std::string_view where) {
  for (auto&& [key, node] : table) {
    if (!known.count(std::string(key.str())))
      throw ConfigError("unknown config key '" + std::string(where) +
                        std::string(key.str()) + "'");
  }
}

const toml::table* subtable(const toml::table& root, const char* name) {
  const toml::node* node = root.get(name);
  if (!node) return nullptr;
  const toml::table* table = node->as_table();
  if (!table) bad_type(name, "a table");
  return table;
}

int checked_int(std::int64_t v, std::string_view key) {
  if (v < std::numeric_limits<int>::min() ||
      v > std::numeric_limits<int>::max())
    bad_type(key, "a 32-bit integer");
  return static_cast<int>(v);
}

// ---- certificate JSON ------------------------------------------------------

Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(); }

template <typename T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json();
}

Json initial_json(const std::optional<InitialTerms>& initial) {
  if (!initial) return Json();
  return Json{{"distance", initial->distance}, {"gap", initial->gap}};
}

Json ergodic_json(const ErgodicCertificate& c) {
  const auto constant = c.bound_constant();
  return Json{{"l1", c.l1},
              {"l2", c.l2},
              {"mu0", c.mu0},
              {"k_norm", c.k_norm},
              {"gamma", c.gamma},
              {"m", c.m},
              {"cond_a", c.cond_a},
              {"cond_a_lhs", c.cond_a_lhs},
              {"cond_b", c.cond_b},
              {"cond_b_lhs", c.cond_b_lhs},
              {"step_supremum",
               number_or_null(ergodic_step_supremum(CertificateConstants{
                   c.l1, c.l2, c.mu0, c.k_norm, 0.0}))},
              {"denominator", c.denominator()},
              {"bound_constant", constant ? number_or_null(*constant) : Json()},
              {"initial", initial_json(c.initial)},
              {"valid", c.valid()}};
}

Json linear_json(const LinearCertificate& c) {
  const auto pre = c.prefactor();
  return Json{{"l1", c.l1},
              {"mu0", c.mu0},
              {"k_norm", c.k_norm},
              {"alpha", c.alpha},
              {"gamma", c.gamma},
              {"m_prime", c.m_prime},
              {"alpha_prime", c.alpha_prime},
              {"tau", c.tau},
              {"eta", c.eta},
              {"lambda", number_or_null(c.lambda)},
              {"rate", c.rate()},
              {"gamma_max_coupling", number_or_null(c.gamma_max_coupling)},
              {"gamma_max_variance", number_or_null(c.gamma_max_variance)},
              {"gamma_max", number_or_null(c.gamma_max)},
              {"step_ok", c.step_ok},
              {"m_min", c.m_min},
              {"m", optional_json(c.m)},
              {"delta", optional_json(c.delta)},
              {"weights", c.weights},
              {"prefactor", pre ? number_or_null(*pre) : Json()},
              {"initial", initial_json(c.initial)},
              {"near_degenerate", c.near_degenerate()},
              {"valid", c.valid()}};
}

// ---- output helpers --------------------------------------------------------

std::string format_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

Json mean_std(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  const double n = static_cast<double>(values.size());
  const double mean = sum / n;
  double sq = 0.0;
  for (double v : values) sq += (v - mean) * (v - mean);
  const double std = values.size() > 1 ? std::sqrt(sq / (n - 1.0)) : 0.0;
  return Json{{"mean", number_or_null(mean)}, {"std", number_or_null(std)}};
}

void write_outputs(const ExperimentConfig& config,
                   const ExperimentResult& result) {
  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  if (ec) throw ConfigError("cannot create " + config.output_dir.string());
  {
    std::ofstream out(config.output_dir / "trace.csv", std::ios::binary);
    if (!out) throw ConfigError("cannot write trace.csv");
    write_trace_csv(out, result.rows);
  }
  std::ofstream out(config.output_dir / "summary.json", std::ios::binary);
  if (!out) throw ConfigError("cannot write summary.json");
  out << result.summary.dump(2) << '\n';
}

SaddleOracle obtain_oracle(const ExperimentConfig& config,
                           const Instance& instance) {
  if (!config.oracle_file) return find_saddle(instance.problem,
                                              config.oracle_method);
  SaddleOracle oracle = load_oracle_file(*config.oracle_file);
  if (oracle.x.size() != instance.problem.primal_dim() ||
      oracle.v.size() != instance.problem.dual_dim())
    throw ConfigError("oracle file dimensions do not match the instance");
  return oracle;
}

}  // namespace

// ---- configuration ---------------------------------------------------------

void ExperimentConfig::validate() const {
  if (instance.empty() && !constants)
    throw ConfigError("config needs an instance");
  if (replications < 1) throw ConfigError("replications must be >= 1");
  if (stages < 0) throw ConfigError("stages must be >= 0");
  if (theta != 0 && theta != 1) throw ConfigError("theta must be 0 or 1");
  if (m && *m < 1) throw ConfigError("m must be a positive integer");
  if (gamma && (!(*gamma > 0.0) || !std::isfinite(*gamma)))
    throw ConfigError("gamma must be positive and finite");
  if (m_prime && !(*m_prime > 0.0)) throw ConfigError("m_prime must be > 0");
}

ExperimentConfig parse_config(std::string_view toml_text,
                              const std::filesystem::path& base_dir) {
  toml::table root;
  try {
    root = toml::parse(toml_text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "config syntax error: " << e.description() << " at line "
        << e.source().begin.line;
    throw ConfigError(msg.str());
  }
  check_keys(root,
             {"instance", "replications", "output_dir", "solver", "sampling",
              "certificate", "oracle", "output", "constants"},
             "");

  const auto resolve = [&](const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_relative() && !base_dir.empty() ? base_dir / path : path;
  };

  ExperimentConfig config;
  if (const auto* n = root.get("instance")) {
    config.instance = as_string(*n, "instance");
    if (!config.instance.empty() && !is_builtin_instance(config.instance))
      config.instance = resolve(config.instance).string();
  }
  if (const auto* n = root.get("replications"))
    config.replications = checked_int(as_int(*n, "replications"),
                                      "replications");
  if (const auto* n = root.get("output_dir"))
    config.output_dir = resolve(as_string(*n, "output_dir"));

  if (const auto* t = subtable(root, "solver")) {
    check_keys(*t,
               {"gamma", "theta", "m", "stages", "weights", "seed",
                "record_inner", "unsafe_override"},
               "solver.");
    if (const auto* n = t->get("gamma")) config.gamma = as_double(*n, "gamma");
    if (const auto* n = t->get("theta"))
      config.theta = checked_int(as_int(*n, "theta"), "theta");
    if (const auto* n = t->get("m"))
      config.m = checked_int(as_int(*n, "m"), "m");
    if (const auto* n = t->get("stages"))
      config.stages = checked_int(as_int(*n, "stages"), "stages");
    if (const auto* n = t->get("weights"))
      config.weights = weight_schedule_from_string(as_string(*n, "weights"));
    if (const auto* n = t->get("seed")) {
      const std::int64_t seed = as_int(*n, "seed");
      if (seed < 0) throw ConfigError("seed must be nonnegative");
      config.seed = static_cast<std::uint64_t>(seed);
    }
    if (const auto* n = t->get("record_inner"))
      config.record_inner = as_bool(*n, "record_inner");
    if (const auto* n = t->get("unsafe_override"))
      config.unsafe_override = as_bool(*n, "unsafe_override");
  }
  if (const auto* t = subtable(root, "sampling")) {
    check_keys(*t, {"mode"}, "sampling.");
    if (const auto* n = t->get("mode"))
      config.sampling = sampling_mode_from_string(as_string(*n, "mode"));
  }
  if (const auto* t = subtable(root, "certificate")) {
    check_keys(*t, {"m_prime"}, "certificate.");
    if (const auto* n = t->get("m_prime"))
      config.m_prime = as_double(*n, "m_prime");
  }
  if (const auto* t = subtable(root, "oracle")) {
    check_keys(*t, {"method", "file"}, "oracle.");
    if (const auto* n = t->get("method"))
      config.oracle_method = oracle_method_from_string(as_string(*n, "method"));
    if (const auto* n = t->get("file"))
      config.oracle_file = resolve(as_string(*n, "file"));
  }
  if (const auto* t = subtable(root, "output")) {
    check_keys(*t, {"timing"}, "output.");
    if (const auto* n = t->get("timing")) config.timing = as_bool(*n, "timing");
  }
  if (const auto* t = subtable(root, "constants")) {
    check_keys(*t, {"l1", "l2", "mu0", "k_norm", "alpha"}, "constants.");
    CertificateConstants c{};
    const auto get = [&](const char* key) {
      const auto* n = t->get(key);
      if (!n) throw ConfigError(std::string("constants.") + key + " missing");
      return as_double(*n, key);
    };
    c.l1 = get("l1");
    c.l2 = get("l2");
    c.mu0 = get("mu0");
    c.k_norm = get("k_norm");
    c.alpha = t->get("alpha") ? get("alpha") : 0.0;
    config.constants = c;
  }
  config.validate();
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.parent_path());
}

Instance resolve_instance(const ExperimentConfig& config) {
  if (config.instance.empty()) throw ConfigError("config needs an instance");
  if (is_builtin_instance(config.instance))
    return make_builtin_instance(config.instance);
  return load_instance_file(config.instance);
}

// ---- certificates ----------------------------------------------------------

bool CertificateReport::selected_valid() const {
  if (theta == 1) return ergodic.valid();
  return linear && linear->valid();
}

Json CertificateReport::to_json() const {
  Json j{{"mode", theta == 1 ? "ergodic" : "linear"},
         {"theta", theta},
         {"gamma", gamma},
         {"m", m},
         {"constants",
          {{"l1", constants.l1},
           {"l2", constants.l2},
           {"mu0", constants.mu0},
           {"k_norm", constants.k_norm},
           {"alpha", constants.alpha}}},
         {"ergodic", ergodic_json(ergodic)},
         {"linear", linear ? linear_json(*linear) : Json()},
         {"valid", selected_valid()}};
  if (!linear) j["linear_error"] = linear_error;
  return j;
}

CertificateReport build_certificate(const ExperimentConfig& config,
                                    const Instance* instance,
                                    const SaddleOracle* oracle) {
  CertificateReport report;
  report.theta = config.theta;
  if (config.constants) {
    report.constants = *config.constants;
  } else {
    if (!instance) throw ConfigError("certificate needs an instance");
    report.constants = CertificateConstants::from(
        instance->problem, make_scheme(instance->problem, config.sampling));
  }
  const CertificateConstants& c = report.constants;

  std::optional<InitialTerms> initial;
  if (instance && oracle) {
    const SaddleProblem& p = instance->problem;
    initial = InitialTerms{
        p.product_bregman(oracle->x, oracle->v, instance->x0, instance->v0),
        primal_dual_gap_pair(p, instance->x0, instance->v0, oracle->x,
                             oracle->v)};
  }

  // Step-independent parts of the linear certificate (gamma_max, M').
  std::optional<LinearCertificate> probe;
  if (c.alpha > 0.0) {
    try {
      probe = certify_linear(c, 1.0, config.m_prime);
    } catch (const ConfigError& e) {
      report.linear_error = e.what();
    }
  } else {
    report.linear_error = "alpha = 0: no relative strong convexity";
  }

  if (config.gamma) {
    report.gamma = *config.gamma;
  } else {
    const double sup = config.theta == 0 && probe
                           ? probe->gamma_max
                           : ergodic_step_supremum(c);
    report.gamma = std::isfinite(sup) ? kDefaultStepFraction * sup : 1.0;
  }

  if (probe) {
    const LinearCertificate base = certify_linear(c, report.gamma,
                                                  config.m_prime);
    int m = config.m.value_or(config.theta == 0 ? base.m_min : 1);
    if (config.theta == 0 && !config.m &&
        base.m_min == std::numeric_limits<int>::max())
      m = 1;
    report.linear = certify_linear(c, report.gamma, config.m_prime, m, initial);
  }
  report.m = config.m.value_or(
      config.theta == 0 && report.linear ? *report.linear->m : 1);
  report.ergodic = certify_ergodic(c, report.gamma, report.m, initial);
  return report;
}

// ---- traces ----------------------------------------------------------------

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows) {
  out << "replication,stage,gap_pair,ergodic_gap,bregman_dist,bound,wall_ms\n";
  for (const TraceRow& r : rows) {
    out << r.replication << ',' << r.stage << ',' << format_number(r.gap_pair)
        << ',' << format_number(r.ergodic_gap) << ','
        << format_number(r.bregman_dist) << ',' << format_number(r.bound)
        << ',' << format_number(r.wall_ms) << '\n';
  }
}

std::vector<TraceRow> read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty trace");
  std::vector<TraceRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 7) throw ConfigError("trace row needs 7 fields");
    const auto num = [](const std::string& s) {
      return std::strtod(s.c_str(), nullptr);
    };
    rows.push_back(TraceRow{std::stoi(cells[0]), std::stoi(cells[1]),
                            num(cells[2]), num(cells[3]), num(cells[4]),
                            num(cells[5]), num(cells[6])});
  }
  return rows;
}

Json stage_statistics(const std::vector<TraceRow>& rows) {
  std::map<int, std::vector<const TraceRow*>> by_stage;
  for (const TraceRow& r : rows) by_stage[r.stage].push_back(&r);
  Json out = Json::array();
  for (const auto& [stage, group] : by_stage) {
    std::vector<double> gap, erg, dist, wall;
    for (const TraceRow* r : group) {
      gap.push_back(r->gap_pair);
      erg.push_back(r->ergodic_gap);
      dist.push_back(r->bregman_dist);
      wall.push_back(r->wall_ms);
    }
    out.push_back(Json{{"stage", stage},
                       {"count", group.size()},
                       {"gap_pair", mean_std(gap)},
                       {"ergodic_gap", mean_std(erg)},
                       {"bregman_dist", mean_std(dist)},
                       {"bound", number_or_null(group.front()->bound)},
                       {"wall_ms", mean_std(wall)}});
  }
  return out;
}

// ---- commands --------------------------------------------------------------

ExperimentResult run_experiment(const ExperimentConfig& config) {
  ExperimentResult result;
  try {
    config.validate();
    const Instance instance = resolve_instance(config);
    const SaddleProblem& problem = instance.problem;
    const SamplingScheme scheme = make_scheme(problem, config.sampling);
    const SaddleOracle oracle = obtain_oracle(config, instance);
    const CertificateReport report =
        build_certificate(config, &instance, &oracle);

    if (!report.selected_valid() && !config.unsafe_override) {
      result.exit_code = kExitCertificateRejected;
      result.message = "certificate rejected; see certify for details";
      result.summary = Json{{"certificate", report.to_json()}};
      return result;
    }

    SolverConfig solver;
    solver.gamma = report.gamma;
    solver.theta = config.theta;
    solver.m = report.m;
    solver.stages = config.stages;
    solver.weights = config.weights.value_or(
        config.theta == 1 ? WeightSchedule::kUniformAverage
                          : WeightSchedule::kGeometricAverage);
    if (report.linear) solver.tau = report.linear->tau;
    solver.record_inner = config.record_inner;
    solver.unsafe_override = config.unsafe_override;
    solver.validate();

    // Bounds apply only to the certified pairings.
    const bool ergodic_bound =
        config.theta == 1 &&
        solver.weights == WeightSchedule::kUniformAverage &&
        report.ergodic.valid();
    const bool linear_bound =
        config.theta == 0 &&
        solver.weights == WeightSchedule::kGeometricAverage && report.linear &&
        report.linear->valid();
    const auto bound_at = [&](int s) {
      if (ergodic_bound) return report.ergodic.bound(s);
      if (linear_bound) return report.linear->bound(s);
      return kInf;
    };

    Json seeds = Json::array();
    Json errors = Json::array();
    const SaddleReference ref{oracle.x, oracle.v};
    for (int r = 0; r < config.replications; ++r) {
      solver.seed = config.seed + static_cast<std::uint64_t>(r);
      seeds.push_back(solver.seed);
      int last_stage = 0;
      const auto sink = [&](const StageRecord& rec) {
        last_stage = rec.stage;
        result.rows.push_back(TraceRow{
            r, rec.stage, rec.gap_pair.value(), rec.ergodic_gap.value(),
            rec.bregman_dist.value(), bound_at(rec.stage),
            config.timing ? rec.wall_ms : 0.0});
      };
      try {
        solve(problem, scheme, solver, instance.x0, instance.v0, ref, sink);
      } catch (const DivergenceError& e) {
        errors.push_back(Json{{"replication", r},
                              {"seed", solver.seed},
                              {"stage", last_stage + 1},
                              {"error", "divergence"},
                              {"message", e.what()}});
        result.exit_code = kExitDivergence;
        result.message = e.what();
        break;
      }
    }

    Json config_echo{{"gamma", solver.gamma},
                     {"theta", solver.theta},
                     {"m", solver.m},
                     {"stages", solver.stages},
                     {"weights", std::string(to_string(solver.weights))},
                     {"tau", solver.tau},
                     {"sampling", std::string(to_string(config.sampling))},
                     {"unsafe_override", solver.unsafe_override},
                     {"timing", config.timing}};
    result.summary = Json{{"instance", instance.name},
                          {"instance_hash", hash_hex(instance_hash(instance))},
                          {"replications", config.replications},
                          {"seeds", seeds},
                          {"config", config_echo},
                          {"certificate", report.to_json()},
                          {"oracle", oracle_to_json(oracle)},
                          {"stages", stage_statistics(result.rows)},
                          {"errors", errors},
                          {"exit_code", result.exit_code}};
    write_outputs(config, result);
  } catch (const OracleFailure& e) {
    result.exit_code = kExitOracleFailure;
    result.message = e.what();
  } catch (const NegativeGapError& e) {
    result.exit_code = kExitOracleFailure;
    result.message = e.what();
  } catch (const Error& e) {
    result.exit_code = kExitMalformedConfig;
    result.message = e.what();
  } catch (const std::bad_optional_access&) {
    result.exit_code = kExitOracleFailure;
    result.message = "gap values unavailable without a saddle reference";
  }
  return result;
}

int certify_command(const ExperimentConfig& config, std::ostream& out) {
  config.validate();
  std::optional<Instance> instance;
  std::optional<SaddleOracle> oracle;
  if (!config.instance.empty()) {
    instance = resolve_instance(config);
    try {
      oracle = obtain_oracle(config, *instance);
    } catch (const OracleFailure&) {
      // Reported parametrically without initial terms.
    }
  }
  const CertificateReport report = build_certificate(
      config, instance ? &*instance : nullptr, oracle ? &*oracle : nullptr);
  out << report.to_json().dump(2) << '\n';
  return report.selected_valid() ? kExitOk : kExitCertificateRejected;
}

int oracle_command(const ExperimentConfig& config, std::ostream& out,
                   const std::optional<std::filesystem::path>& file) {
  const Instance instance = resolve_instance(config);
  const SaddleOracle oracle = find_saddle(instance.problem,
                                          config.oracle_method);
  const std::string text = oracle_to_json(oracle).dump(2);
  if (file) {
    std::ofstream f(*file, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + file->string());
    f << text << '\n';
  } else {
    out << text << '\n';
  }
  return kExitOk;
}

void list_instances(std::ostream& out) {
  for (const std::string& name : builtin_instance_names()) {
    const Instance instance = make_builtin_instance(name);
    out << name << '\t' << instance.description << '\n';
  }
}

}  // namespace bregvr
