/*
 * Copyright 2026 The upliftbench Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Command-line front end: generate, validate, separability, ite-bench.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "upliftbench/errors.h"
#include "upliftbench/experiment_config.h"
#include "upliftbench/experiments.h"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitExperiment = 3;

struct Flags {
  std::string config;
  std::string data;
  std::string schema;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
};

void AddFlags(CLI::App* cmd, Flags* flags) {
  cmd->add_option("--config", flags->config, "YAML experiment config");
  cmd->add_option("--data", flags->data, "CSV data file (plain or gzip)");
  cmd->add_option("--schema", flags->schema, "YAML schema descriptor for --data");
  cmd->add_option("--out", flags->out, "Output directory");
  cmd->add_option("--seed", flags->seed, "Seed for the experiment and the generator");
  cmd->add_option("--workers", flags->workers, "Worker threads")->check(CLI::PositiveNumber);
}

upliftbench::ExperimentConfig BuildConfig(upliftbench::Protocol protocol,
                                          const Flags& flags) {
  using upliftbench::ConfigError;
  upliftbench::ExperimentConfig config =
      flags.config.empty() ? upliftbench::DefaultConfig(protocol)
                           : upliftbench::LoadExperimentConfig(flags.config, protocol);
  if (config.protocol != protocol) {
    throw ConfigError("config file is for protocol '" +
                      std::string(upliftbench::ProtocolName(config.protocol)) +
                      "', not '" + std::string(upliftbench::ProtocolName(protocol)) + "'");
  }
  if (!flags.data.empty()) config.data_path = flags.data;
  if (!flags.schema.empty()) config.schema_path = flags.schema;
  if (!flags.out.empty()) config.output = flags.out;
  if (flags.seed) {
    config.seed = *flags.seed;
    config.generator.seed = *flags.seed;
  }
  if (flags.workers) config.workers = *flags.workers;
  if (config.data_path && !std::filesystem::exists(*config.data_path)) {
    throw upliftbench::DataError("data file " + config.data_path->string() +
                                 " does not exist");
  }
  if (config.schema_path && !std::filesystem::exists(*config.schema_path)) {
    throw upliftbench::DataError("schema file " + config.schema_path->string() +
                                 " does not exist");
  }
  return config;
}

upliftbench::EvaluationReport Run(const upliftbench::ExperimentConfig& config) {
  using upliftbench::Protocol;
  switch (config.protocol) {
    case Protocol::kGenerate:
      return upliftbench::MakeReport(config, upliftbench::RunGenerate(config));
    case Protocol::kValidate:
      return upliftbench::MakeReport(config, upliftbench::RunValidate(config));
    case Protocol::kSeparability:
      return upliftbench::MakeReport(config, upliftbench::RunSeparability(config));
    case Protocol::kIteBenchmark:
      return upliftbench::MakeReport(config, upliftbench::RunIteBenchmark(config));
  }
  throw upliftbench::ConfigError("unknown protocol");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uplift modeling and treatment-effect benchmark toolkit"};
  app.require_subcommand(1);
  Flags flags;
  const std::pair<const char*, upliftbench::Protocol> commands[] = {
      {"generate", upliftbench::Protocol::kGenerate},
      {"validate", upliftbench::Protocol::kValidate},
      {"separability", upliftbench::Protocol::kSeparability},
      {"ite-bench", upliftbench::Protocol::kIteBenchmark},
  };
  const char* help[] = {
      "Write a semi-synthetic dataset, its ground truth and a manifest",
      "Constraint, C2ST and informativeness checks",
      "AUUC confidence intervals on nested test subsamples",
      "sqrt(PEHE) of the meta-learners over generated realizations",
  };
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < std::size(commands); ++i) {
    CLI::App* sub = app.add_subcommand(commands[i].first, help[i]);
    AddFlags(sub, &flags);
    subs.push_back(sub);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  upliftbench::Protocol protocol = upliftbench::Protocol::kGenerate;
  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (subs[i]->parsed()) protocol = commands[i].second;
  }

  upliftbench::ExperimentConfig config;
  try {
    config = BuildConfig(protocol, flags);
  } catch (const upliftbench::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const upliftbench::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }

  try {
    const upliftbench::EvaluationReport report = Run(config);
    upliftbench::WriteReport(report, config.output);
    std::cout << report.table;
  } catch (const upliftbench::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const upliftbench::SchemaError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const upliftbench::ParseError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const upliftbench::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "experiment failed: " << e.what() << '\n';
    return kExitExperiment;
  }
  return 0;
}
