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

// Uplift and ITE baselines. Every fit returns an UpliftScorer whose Score()
// is a pure function of its fitted parameter blocks.

#ifndef UPLIFTBENCH_UPLIFT_LEARNERS_H_
#define UPLIFTBENCH_UPLIFT_LEARNERS_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "upliftbench/linear_models.h"

namespace upliftbench {

enum class UpliftMethod {
  kTwoModel,
  kCvt,
  kMom,
  kSdr,
  kTLearner,
  kXLearner,
  kRLearner,
  kDrLearner,
};

enum class PropensityMode { kModel, kConstant };

inline constexpr double kPropensityClip = 0.01;

struct MetaLearnerConfig {
  // Per-arm outcome models (TM, T, X stage one, DR), the CVT and SDR
  // classifier, and the R-learner mean model.
  BaseLearnerConfig outcome;
  // Effect regressions: MOM, X stage two, R and DR final stage.
  BaseLearnerConfig effect;
  // Propensity classifier (X weighting, R and DR nuisance).
  BaseLearnerConfig propensity{BaseKind::kLogistic, 1.0};
  // SDR: the interaction block is penalized with l2 / lambda.
  double sdr_lambda = 1.0;
  // CVT: inverse-propensity class weights; false gives the classic variant.
  bool cvt_weighted = true;
  // X-learner weighting function g(x).
  PropensityMode x_propensity = PropensityMode::kModel;
  // Overrides the empirical treatment ratio when x_propensity is kConstant.
  std::optional<double> constant_propensity;
  int cross_fit_folds = 2;
  std::uint64_t seed = 0;
};

struct ScorerBlock {
  std::string name;
  LinearModel model;
};

class UpliftScorer {
 public:
  UpliftScorer(UpliftMethod method, MetaLearnerConfig config,
               double treatment_ratio, std::vector<ScorerBlock> blocks,
               std::optional<double> constant_propensity = std::nullopt);

  Eigen::VectorXd Score(const Eigen::MatrixXd& x) const;

  UpliftMethod method() const { return method_; }
  const MetaLearnerConfig& config() const { return config_; }
  double treatment_ratio() const { return treatment_ratio_; }
  const std::vector<ScorerBlock>& blocks() const { return blocks_; }
  std::optional<double> constant_propensity() const {
    return constant_propensity_;
  }
  // Throws std::out_of_range for unknown names.
  const LinearModel& block(std::string_view name) const;

 private:
  UpliftMethod method_;
  MetaLearnerConfig config_;
  double treatment_ratio_;
  std::vector<ScorerBlock> blocks_;
  std::optional<double> constant_propensity_;
};

// Shared signature: x (n x d), outcome y, treatment t in {0, 1}.

// Separate models per arm; score = m1(x) - m0(x). TM and T-learner are the
// same estimator under two names.
UpliftScorer FitTwoModel(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                         const Eigen::VectorXd& t, const MetaLearnerConfig& config);
UpliftScorer FitTLearner(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                         const Eigen::VectorXd& t, const MetaLearnerConfig& config);

// Z = T Y + (1 - T)(1 - Y); score = 2 g(x) - 1.
double CvtLabel(double t, double y);
UpliftScorer FitCvt(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                    const Eigen::VectorXd& t, const MetaLearnerConfig& config);

// Y* = Y T / e - Y (1 - T) / (1 - e), regressed with ridge.
double ModifiedOutcome(double t, double y, double treatment_ratio);
UpliftScorer FitMom(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                    const Eigen::VectorXd& t, const MetaLearnerConfig& config);

// One logistic model on [x, t x, t]; score = m([x, x, 1]) - m([x, 0, 0]).
Eigen::MatrixXd SdrDesign(const Eigen::MatrixXd& x, const Eigen::VectorXd& t);
UpliftScorer FitSdr(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                    const Eigen::VectorXd& t, const MetaLearnerConfig& config);

UpliftScorer FitXLearner(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                         const Eigen::VectorXd& t, const MetaLearnerConfig& config);

// Pseudo-outcomes and weights of the R-loss. Rows with t == e get weight 0
// and pseudo-outcome 0.
struct WeightedTargets {
  Eigen::VectorXd target;
  Eigen::VectorXd weight;
};
WeightedTargets RLearnerTargets(const Eigen::VectorXd& y, const Eigen::VectorXd& t,
                                const Eigen::VectorXd& mean_hat,
                                const Eigen::VectorXd& propensity_hat);
UpliftScorer FitRLearner(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                         const Eigen::VectorXd& t, const MetaLearnerConfig& config);

// Doubly robust pseudo-outcome; propensities are clipped to
// [kPropensityClip, 1 - kPropensityClip].
Eigen::VectorXd DrPseudoOutcome(const Eigen::VectorXd& y, const Eigen::VectorXd& t,
                                const Eigen::VectorXd& mu0_hat,
                                const Eigen::VectorXd& mu1_hat,
                                const Eigen::VectorXd& propensity_hat);
UpliftScorer FitDrLearner(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                          const Eigen::VectorXd& t, const MetaLearnerConfig& config);

UpliftScorer FitUplift(UpliftMethod method, const Eigen::MatrixXd& x,
                       const Eigen::VectorXd& y, const Eigen::VectorXd& t,
                       const MetaLearnerConfig& config);

// True for methods that require a binary outcome (CVT, SDR).
bool RequiresBinaryOutcome(UpliftMethod method);

std::string_view UpliftMethodName(UpliftMethod method);
UpliftMethod ParseUpliftMethod(std::string_view name);

}  // namespace upliftbench

#endif  // UPLIFTBENCH_UPLIFT_LEARNERS_H_
