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

#ifndef UPLIFTBENCH_EXPERIMENT_CONFIG_H_
#define UPLIFTBENCH_EXPERIMENT_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "upliftbench/csv_io.h"
#include "upliftbench/dataset.h"
#include "upliftbench/synthgen.h"
#include "upliftbench/uplift_learners.h"

namespace upliftbench {

enum class Protocol { kSeparability, kIteBenchmark, kGenerate, kValidate };

struct ExperimentConfig {
  Protocol protocol = Protocol::kIteBenchmark;

  // Data source: a CSV file when set, the generator otherwise.
  std::optional<std::filesystem::path> data_path;
  std::optional<std::filesystem::path> schema_path;
  GeneratorConfig generator;

  std::vector<UpliftMethod> methods;
  // Encoding used by the learners of the separability and validate protocols.
  EncodingParams encoding;
  OutcomeKind outcome = OutcomeKind::kVisit;
  int cv_folds = 5;
  int auuc_resolution = 100;

  // Separability.
  double train_fraction = 0.8;
  std::vector<std::size_t> test_sizes = {1000, 5000, 20000};
  // Cap on training rows (0 keeps all of them).
  std::size_t max_train_rows = 0;
  int n_bootstrap = 1000;
  // Adds the true-effect scorer and a copy perturbed by Gaussian noise of
  // planted_noise * sd(tau) (synthetic sources only).
  bool planted_pair = true;
  double planted_noise = 1.0;
  std::vector<double> logistic_c_grid;
  std::vector<double> ridge_alpha_grid;
  std::vector<double> sdr_c_grid;
  std::vector<double> sdr_lambda_grid;

  // ITE benchmark.
  std::vector<SurfaceKind> surfaces = {SurfaceKind::kCaseA, SurfaceKind::kCaseB,
                                       SurfaceKind::kMultiPeaked};
  int n_realizations = 10;
  double ite_train_fraction = 0.5;
  std::vector<double> ite_l2_grid;
  bool include_oracle = true;

  // Validate.
  int c2st_permutations = 99;
  std::vector<double> c2st_c_grid = {1.0};

  std::uint64_t seed = 0;
  int workers = 1;
  std::filesystem::path output = "out";
};

ExperimentConfig DefaultConfig(Protocol protocol);

// Reads a YAML config. Keys absent from the file keep DefaultConfig values for
// the protocol named by the `protocol` key (or `fallback` when absent).
ExperimentConfig LoadExperimentConfig(const std::filesystem::path& path,
                                      Protocol fallback = Protocol::kIteBenchmark);
ExperimentConfig ParseExperimentConfig(std::string_view yaml_text,
                                       Protocol fallback = Protocol::kIteBenchmark);

// YAML rendering that ParseExperimentConfig reads back to an equal config.
std::string ToYaml(const ExperimentConfig& config);

std::string_view ProtocolName(Protocol protocol);
Protocol ParseProtocol(std::string_view name);

}  // namespace upliftbench

#endif  // UPLIFTBENCH_EXPERIMENT_CONFIG_H_
