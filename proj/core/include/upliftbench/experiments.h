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

// The four protocols driven by the command-line tool: dataset generation,
// dataset validation, the uplift separability experiment and the ITE
// benchmark.

#ifndef UPLIFTBENCH_EXPERIMENTS_H_
#define UPLIFTBENCH_EXPERIMENTS_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "upliftbench/dataset.h"
#include "upliftbench/experiment_config.h"
#include "upliftbench/metrics.h"
#include "upliftbench/validation.h"

namespace upliftbench {

// Scorer names used for the planted contrast and the ITE oracle column.
inline constexpr std::string_view kOracleName = "oracle";
inline constexpr std::string_view kNoisedOracleName = "noised_oracle";

struct SeparabilityResult {
  std::vector<std::string> methods;
  std::vector<std::size_t> sizes;
  std::vector<std::size_t> skipped_sizes;
  // auuc[size][method].
  std::vector<std::vector<MetricResult>> auuc;
  // Grid label chosen for each learned method (empty for planted scorers).
  std::vector<std::string> chosen;
  std::size_t train_rows = 0;
  std::size_t test_rows = 0;

  bool Overlap(std::size_t size_index, std::size_t a, std::size_t b) const;
  std::optional<std::size_t> MethodIndex(std::string_view name) const;
};

// Two intervals overlap when neither lies strictly above the other.
bool CiOverlap(const MetricResult& a, const MetricResult& b);

SeparabilityResult RunSeparability(const ExperimentConfig& config);

struct IteCell {
  std::optional<double> pehe;
  std::string chosen;
  std::string error;
};

struct IteSummary {
  double mean = 0.0;
  double std = 0.0;
  int completed = 0;
  bool best = false;
};

struct IteBenchmarkResult {
  std::vector<SurfaceKind> surfaces;
  std::vector<std::string> methods;
  int n_realizations = 0;
  // cells[surface][method][realization].
  std::vector<std::vector<std::vector<IteCell>>> cells;

  // Mean and sample std over completed realizations; best marks the lowest
  // mean among learned methods of the surface.
  std::vector<std::vector<IteSummary>> Summaries() const;
  bool Complete() const;
};

IteBenchmarkResult RunIteBenchmark(const ExperimentConfig& config);

struct GenerateResult {
  std::filesystem::path data;
  std::filesystem::path truth;
  std::filesystem::path manifest;
  std::size_t rows = 0;
};

// Writes data.csv, ground_truth.csv and manifest.yaml into config.output. The
// manifest is a config that regenerates both files bit for bit.
GenerateResult RunGenerate(const ExperimentConfig& config);

// Sidecar with one row per sample: mu0, mu1, tau, propensity.
void WriteGroundTruthCsv(const GroundTruth& truth, const std::filesystem::path& path);

struct OutcomeCheck {
  std::string outcome;
  std::optional<DummyImprovementResult> result;
  std::string error;
};

struct ValidationResult {
  std::size_t rows = 0;
  ConstraintReport constraints;
  double treatment_ratio = 0.0;
  double visit_rate = 0.0;
  double conversion_rate = 0.0;
  double exposure_rate = 0.0;
  C2stResult c2st;
  std::vector<OutcomeCheck> informativeness;
};

ValidationResult RunValidate(const ExperimentConfig& config);

// Machine-readable tree plus a rendered text table.
struct EvaluationReport {
  nlohmann::json tree;
  std::string table;
  // Plottable rows (CSV text).
  std::string csv;
};

EvaluationReport MakeReport(const ExperimentConfig& config,
                            const SeparabilityResult& result);
EvaluationReport MakeReport(const ExperimentConfig& config,
                            const IteBenchmarkResult& result);
EvaluationReport MakeReport(const ExperimentConfig& config,
                            const ValidationResult& result);
EvaluationReport MakeReport(const ExperimentConfig& config,
                            const GenerateResult& result);

// report.json, report.txt and (when non-empty) report.csv under directory.
void WriteReport(const EvaluationReport& report,
                 const std::filesystem::path& directory);

}  // namespace upliftbench

#endif  // UPLIFTBENCH_EXPERIMENTS_H_
