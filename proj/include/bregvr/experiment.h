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

// Experiment configuration, orchestration and output files.
//
// TOML layout (every table optional except where noted):
//
//   instance = "entropy-game-20"   # builtin name or path to instance JSON
//   replications = 20
//   output_dir = "out"
//   [solver]
//   gamma = 0.05        # default: 0.9 x the certified step supremum
//   theta = 1
//   m = 50              # theta = 0 defaults to the certificate's m_min
//   stages = 256
//   weights = "uniform" # default follows theta
//   seed = 0
//   record_inner = false
//   unsafe_override = false
//   [sampling]
//   mode = "uniform"    # or "lipschitz"
//   [certificate]
//   m_prime = 4.0
//   [oracle]
//   method = "auto"     # "closed_form", "deterministic"
//   file = "oracle.json"
//   [output]
//   timing = false      # wall_ms column is 0 unless enabled
//   [constants]         # certify only: replaces the instance constants
//   l1 = 1.0  l2 = 1.0  mu0 = 1.0  k_norm = 1.0  alpha = 0.0

#ifndef BREGVR_EXPERIMENT_H_
#define BREGVR_EXPERIMENT_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bregvr/baselines.h"
#include "bregvr/certificates.h"
#include "bregvr/estimator.h"
#include "bregvr/instance_io.h"
#include "bregvr/instances.h"
#include "bregvr/solver.h"

namespace bregvr {

enum ExitCode : int {
  kExitOk = 0,
  kExitCertificateRejected = 2,
  kExitDivergence = 3,
  kExitMalformedConfig = 4,
  kExitOracleFailure = 5,
};

struct ExperimentConfig {
  std::string instance;
  int replications = 1;
  std::filesystem::path output_dir = "out";

  std::optional<double> gamma;
  int theta = 1;
  std::optional<int> m;
  int stages = 0;
  std::optional<WeightSchedule> weights;
  std::uint64_t seed = 0;
  bool record_inner = false;
  bool unsafe_override = false;

  SamplingMode sampling = SamplingMode::kUniform;
  std::optional<double> m_prime;
  OracleMethod oracle_method = OracleMethod::kAuto;
  std::optional<std::filesystem::path> oracle_file;
  bool timing = false;
  std::optional<CertificateConstants> constants;

  // Throws ConfigError.
  void validate() const;
};

// Relative instance and oracle paths resolve against base_dir. Throws
// ConfigError on syntax errors, unknown keys or wrong types.
ExperimentConfig parse_config(std::string_view toml_text,
                              const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

Instance resolve_instance(const ExperimentConfig& config);

// Both certificates of a configuration plus the one selected by theta.
struct CertificateReport {
  CertificateConstants constants;
  double gamma = 0.0;
  int m = 1;
  int theta = 1;
  ErgodicCertificate ergodic;
  std::optional<LinearCertificate> linear;
  // Why the linear certificate is unavailable (alpha = 0, bad M').
  std::string linear_error;

  bool selected_valid() const;
  Json to_json() const;
};

// Builds the certificate of `config` on `instance`. gamma and m fall back to
// their certified defaults; initial terms are filled when an oracle is given.
CertificateReport build_certificate(const ExperimentConfig& config,
                                    const Instance* instance,
                                    const SaddleOracle* oracle);

struct TraceRow {
  int replication = 0;
  int stage = 0;
  double gap_pair = 0.0;
  double ergodic_gap = 0.0;
  double bregman_dist = 0.0;
  double bound = 0.0;
  double wall_ms = 0.0;
};

// Header plus one line per row, %.17g numbers ("inf" for infinities).
void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows);
std::vector<TraceRow> read_trace_csv(std::istream& in);

// Per-stage mean and sample standard deviation over replications, in
// replication order.
Json stage_statistics(const std::vector<TraceRow>& rows);

struct ExperimentResult {
  int exit_code = kExitOk;
  std::string message;
  std::vector<TraceRow> rows;
  Json summary;
};

// Runs all replications and writes trace.csv and summary.json into
// config.output_dir (also when a replication diverges).
ExperimentResult run_experiment(const ExperimentConfig& config);

// Prints the certificate JSON; returns kExitOk or kExitCertificateRejected.
int certify_command(const ExperimentConfig& config, std::ostream& out);

// Prints the oracle JSON, or writes it to `file` when given.
int oracle_command(const ExperimentConfig& config, std::ostream& out,
                   const std::optional<std::filesystem::path>& file);

void list_instances(std::ostream& out);

}  // namespace bregvr

#endif  // BREGVR_EXPERIMENT_H_
