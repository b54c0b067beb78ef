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

#ifndef UPLIFTBENCH_TUNING_H_
#define UPLIFTBENCH_TUNING_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "upliftbench/uplift_learners.h"

namespace upliftbench {

struct GridPoint {
  MetaLearnerConfig config;
  std::string label;
  // Regularization strength used to break ties (larger wins).
  double penalty = 0.0;
};

enum class TuningObjective {
  // Maximize validation AUUC (uplift data).
  kAuuc,
  // Minimize validation sqrt(PEHE) against the ground-truth effect.
  kPehe,
};

struct LearningTask {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  Eigen::VectorXd t;
  // Ground-truth effects; required by kPehe.
  std::optional<Eigen::VectorXd> tau;

  Eigen::Index size() const { return y.size(); }
  LearningTask Rows(std::span<const std::size_t> rows) const;
};

struct TuneOptions {
  int folds = 5;
  TuningObjective objective = TuningObjective::kAuuc;
  int auuc_resolution = 100;
  std::uint64_t seed = 0;
  int workers = 1;
};

struct CvRow {
  std::string label;
  double penalty = 0.0;
  std::vector<double> fold_scores;
  double mean = 0.0;
  bool valid = true;
  std::string error;
};

struct TuneResult {
  std::size_t best_index = 0;
  MetaLearnerConfig best;
  std::vector<CvRow> table;
};

// Grid search with stratified k-fold cross-validation (strata on T, plus Y
// for binary outcomes). A config with a failing fold is marked invalid; if
// every config is invalid a FitError is thrown.
TuneResult Tune(UpliftMethod method, const std::vector<GridPoint>& grid,
                const LearningTask& task, const TuneOptions& options);

// Logistic C grid for TM and CVT: C in {1e0, 1e2, 1e4, 1e6, 1e8}.
std::vector<double> DefaultLogisticCGrid();
// Ridge alpha grid for MOM: {1e-8, 1e-6, 1e-4, 1e-2, 1e0}.
std::vector<double> DefaultRidgeAlphaGrid();
// SDR: C in {1, 10, 100, 1000} and lambda in {0.1, 1}.
std::vector<double> DefaultSdrCGrid();
std::vector<double> DefaultSdrLambdaGrid();
// Effect-stage ridge grid of the ITE meta-learners, spanning near-OLS to
// near-constant fits: {1e-2, 1e0, 1e2, 1e4, 1e6}.
std::vector<double> DefaultIteRidgeGrid();

// Grid over the tuned parameter of a method; base holds the fixed parts.
std::vector<GridPoint> DefaultUpliftGrid(UpliftMethod method,
                                         const MetaLearnerConfig& base = {});
std::vector<GridPoint> DefaultIteGrid(UpliftMethod method,
                                      const MetaLearnerConfig& base = {},
                                      const std::vector<double>& l2_grid =
                                          DefaultIteRidgeGrid());

}  // namespace upliftbench

#endif  // UPLIFTBENCH_TUNING_H_
