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

// bregvr run | certify | oracle | list-instances

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "bregvr/errors.h"
#include "bregvr/experiment.h"

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> stages;
  bool unsafe_override = false;
  std::optional<std::string> output;
};

void add_flags(CLI::App* cmd, Flags& flags, const char* output_help) {
  cmd->add_option("--config", flags.config, "TOML experiment config")
      ->required();
  cmd->add_option("--seed", flags.seed, "base seed (overrides the config)");
  cmd->add_option("--stages", flags.stages, "number of stages N");
  cmd->add_flag("--unsafe-override", flags.unsafe_override,
                "run even when the certificate rejects the configuration");
  cmd->add_option("--output", flags.output, output_help);
}

bregvr::ExperimentConfig load(const Flags& flags, bool output_is_dir) {
  bregvr::ExperimentConfig config = bregvr::load_config(flags.config);
  if (flags.seed) config.seed = *flags.seed;
  if (flags.stages) config.stages = *flags.stages;
  if (flags.unsafe_override) config.unsafe_override = true;
  if (flags.output && output_is_dir) config.output_dir = *flags.output;
  config.validate();
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic variance-reduced primal-dual splitting"};
  app.require_subcommand(1);

  Flags run_flags, certify_flags, oracle_flags;
  CLI::App* run = app.add_subcommand("run", "run an experiment");
  add_flags(run, run_flags, "output directory");
  CLI::App* certify =
      app.add_subcommand("certify", "print the step-size certificate");
  add_flags(certify, certify_flags, "unused");
  CLI::App* oracle = app.add_subcommand("oracle", "compute a saddle point");
  add_flags(oracle, oracle_flags, "write the oracle JSON to this file");
  CLI::App* list = app.add_subcommand("list-instances", "builtin instances");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : bregvr::kExitMalformedConfig;
  }

  try {
    if (*list) {
      bregvr::list_instances(std::cout);
      return bregvr::kExitOk;
    }
    if (*run) {
      const bregvr::ExperimentResult result =
          bregvr::run_experiment(load(run_flags, true));
      if (result.exit_code == bregvr::kExitCertificateRejected)
        std::cout << result.summary.dump(2) << '\n';
      if (result.exit_code != bregvr::kExitOk)
        std::cerr << "bregvr: " << result.message << '\n';
      return result.exit_code;
    }
    if (*certify)
      return bregvr::certify_command(load(certify_flags, false), std::cout);
    if (*oracle) {
      std::optional<std::filesystem::path> file;
      if (oracle_flags.output) file = *oracle_flags.output;
      return bregvr::oracle_command(load(oracle_flags, false), std::cout,
                                    file);
    }
  } catch (const bregvr::OracleFailure& e) {
    std::cerr << "bregvr: " << e.what() << '\n';
    return bregvr::kExitOracleFailure;
  } catch (const bregvr::DivergenceError& e) {
    std::cerr << "bregvr: " << e.what() << '\n';
    return bregvr::kExitDivergence;
  } catch (const std::exception& e) {
    std::cerr << "bregvr: " << e.what() << '\n';
    return bregvr::kExitMalformedConfig;
  }
  return bregvr::kExitOk;
}
