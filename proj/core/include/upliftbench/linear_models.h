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

#ifndef UPLIFTBENCH_LINEAR_MODELS_H_
#define UPLIFTBENCH_LINEAR_MODELS_H_

#include <cstdint>
#include <optional>
#include <string_view>

#include <Eigen/Core>

namespace upliftbench {

enum class BaseKind { kRidge, kLogistic };

struct BaseLearnerConfig {
  BaseKind kind = BaseKind::kRidge;
  // Ridge alpha, or 1/C for the logistic model.
  double l2 = 1.0;
  int max_iters = 500;
  double tol = 1e-6;
  std::uint64_t seed = 0;
};

// Validates the config invariants (l2 >= 0, tol > 0, max_iters >= 1).
void CheckConfig(const BaseLearnerConfig& config);

struct LinearModel {
  BaseKind kind = BaseKind::kRidge;
  Eigen::VectorXd weights;
  double intercept = 0.0;

  // Raw prediction for ridge, probability for logistic.
  Eigen::VectorXd Predict(const Eigen::MatrixXd& x) const;
  Eigen::VectorXd Linear(const Eigen::MatrixXd& x) const;
};

struct RidgeOptions {
  bool fit_intercept = true;
};

// argmin sum_i v_i (y_i - x_i w - b)^2 + l2 |w|^2 with an unpenalized
// intercept. Weights default to 1; rows with zero weight do not contribute.
// Throws FitError when the normal equations are singular.
LinearModel FitRidge(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                     double l2, const Eigen::VectorXd* sample_weights = nullptr,
                     const RidgeOptions& options = {});

// Regularized logistic objective
//   f(w, b) = (1/n) sum_i v_i logloss(y_i, x_i w + b) + l2/(2n) sum_j s_j w_j^2
// where v are sample weights and s per-feature penalty scales (both default
// to 1).
class LogisticObjective {
 public:
  LogisticObjective(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                    double l2, const Eigen::VectorXd* sample_weights = nullptr,
                    const Eigen::VectorXd* penalty_scale = nullptr);

  // theta = (w, b).
  double Value(const Eigen::VectorXd& theta) const;
  double ValueAndGradient(const Eigen::VectorXd& theta,
                          Eigen::VectorXd* gradient) const;
  Eigen::Index num_params() const { return x_.cols() + 1; }

 private:
  double Evaluate(const Eigen::VectorXd& theta, Eigen::VectorXd* gradient) const;

  const Eigen::MatrixXd& x_;
  const Eigen::VectorXd& y_;
  double l2_;
  Eigen::VectorXd sample_weights_;
  Eigen::VectorXd penalty_scale_;
};

struct LogisticFit {
  LinearModel model;
  bool converged = false;
  int iterations = 0;
  double objective = 0.0;
};

// Full-batch gradient descent with a Barzilai-Borwein trial step and Armijo
// backtracking. Converged once the gradient infinity-norm drops below tol.
// Throws DataError when y is not binary.
LogisticFit FitLogistic(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                        const BaseLearnerConfig& config,
                        const Eigen::VectorXd* sample_weights = nullptr,
                        const Eigen::VectorXd* penalty_scale = nullptr,
                        const Eigen::VectorXd* warm_start = nullptr);

// Fits the model named by config.kind.
LinearModel FitBase(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                    const BaseLearnerConfig& config);

double Sigmoid(double z);

// Mean binary log-loss with probabilities clipped to [1e-15, 1 - 1e-15].
double LogLoss(const Eigen::VectorXd& y, const Eigen::VectorXd& p);

bool IsBinary(const Eigen::VectorXd& y);

std::string_view BaseKindName(BaseKind kind);
BaseKind ParseBaseKind(std::string_view name);

}  // namespace upliftbench

#endif  // UPLIFTBENCH_LINEAR_MODELS_H_
