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

#ifndef UPLIFTBENCH_VALIDATION_H_
#define UPLIFTBENCH_VALIDATION_H_

#include <cstdint>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

namespace upliftbench {

struct C2stOptions {
  // Inverse regularization strengths tried by the classifier. The statistic is
  // the smallest held-out log-loss over the grid, for the observed and for
  // every permuted labelling alike.
  std::vector<double> c_grid = {1.0};
  int max_iters = 300;
  double tol = 1e-5;
  int workers = 1;
};

struct C2stResult {
  double model_loss = 0.0;
  std::vector<double> null_losses;
  double p_value = 1.0;
  int n_permutations = 0;

  double median_null_loss() const;
};

// Classifier two-sample test of T independent of X: a logistic classifier is
// trained on a stratified half and scored by log-loss on the other half. The
// null distribution comes from refitting on permuted labels (train half and
// test half permuted separately) and
//   p = (1 + #{null <= model}) / (1 + n_permutations).
C2stResult C2st(const Eigen::MatrixXd& x, const Eigen::VectorXd& t,
                int n_permutations, std::uint64_t seed,
                const C2stOptions& options = {});

struct DummyImprovementOptions {
  std::vector<double> c_grid = {1.0, 1e2, 1e4};
  int inner_folds = 3;
  double test_fraction = 0.2;
  int max_iters = 300;
  double tol = 1e-5;
};

struct DummyImprovementResult {
  double improvement_percent = 0.0;
  double dummy_loss = 0.0;
  double model_loss = 0.0;
  double chosen_c = 0.0;
};

// 100 (LL_dummy - LL_model) / LL_dummy.
double RelativeImprovement(double dummy_loss, double model_loss);

// Log-loss gain of a tuned logistic classifier over the train base rate on a
// stratified 80/20 split.
DummyImprovementResult DummyImprovement(const Eigen::MatrixXd& x,
                                        const Eigen::VectorXd& y,
                                        std::uint64_t seed,
                                        const DummyImprovementOptions& options = {});

nlohmann::json ToJson(const C2stResult& result);
nlohmann::json ToJson(const DummyImprovementResult& result);

}  // namespace upliftbench

#endif  // UPLIFTBENCH_VALIDATION_H_
