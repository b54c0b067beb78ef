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

// Semi-synthetic data with known ground truth: covariates shaped like the
// public uplift corpus, linear / exponential / multi-peaked response surfaces,
// randomized or confounded treatment assignment, and calibrated outcomes.

#ifndef UPLIFTBENCH_SYNTHGEN_H_
#define UPLIFTBENCH_SYNTHGEN_H_

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "upliftbench/dataset.h"
#include "upliftbench/encoding.h"
#include "upliftbench/random.h"

namespace upliftbench {

inline constexpr std::array<std::int64_t, kNumCategorical>
    kCategoricalCardinalities = {60, 552, 260, 132, 1645, 3743, 1594, 136};

struct CovariateParams {
  // Pairwise correlation of the continuous features.
  double correlation = 0.2;
  // Zipf exponent of the categorical codes.
  double zipf_exponent = 1.2;
};

// Features only; treatment and labels are zero.
Dataset GenerateCovariates(std::size_t n, std::uint64_t seed,
                           const CovariateParams& params = {});

enum class SurfaceKind { kCaseA, kCaseB, kMultiPeaked };

// Distance used by the multi-peaked kernels. kRootMeanSquare divides the
// squared Euclidean distance by the dimension.
enum class AnchorDistance { kEuclidean, kRootMeanSquare };

struct SurfaceSpec {
  SurfaceKind kind = SurfaceKind::kCaseA;

  // Case A / B: mu0 = x beta (A), mu0 = exp((x + offset) beta) (B).
  Eigen::VectorXd beta;
  double offset = 0.5;
  // Case B: mu1 = x beta - omega.
  double omega = 0.0;

  // Multi-peaked: one anchor per row, with its weights and width.
  Eigen::MatrixXd anchors;
  Eigen::VectorXd w0;
  Eigen::VectorXd w1;
  Eigen::VectorXd sigmas;
  AnchorDistance distance = AnchorDistance::kRootMeanSquare;

  // Constant effect of case A, ATT target of case B, ATE target of the
  // multi-peaked surface.
  double target_effect = 4.0;
  std::uint64_t seed = 0;
};

struct SurfaceParams {
  std::vector<double> case_a_support = {0, 1, 2, 3, 4};
  std::vector<double> case_a_probs = {0.5, 0.2, 0.15, 0.1, 0.05};
  std::vector<double> case_b_support = {0, 0.1, 0.2, 0.3, 0.4};
  std::vector<double> case_b_probs = {0.6, 0.1, 0.1, 0.1, 0.1};
  double case_b_offset = 0.5;
  int n_anchors = 5;
  double sigma = 1.0;
  // Anchor weights are drawn from U(0, weight_scale).
  double weight_scale = 1.0;
  AnchorDistance distance = AnchorDistance::kRootMeanSquare;
  double target_effect = 4.0;
};

// Draws the random parts of a surface (beta, or anchors and weights).
// Anchors are the encoded rows of uniformly sampled individuals.
SurfaceSpec SampleSurface(SurfaceKind kind, const EncodedMatrix& encoded,
                          const SurfaceParams& params, std::uint64_t seed);

struct SurfaceValues {
  Eigen::VectorXd mu0;
  Eigen::VectorXd mu1;
};

// Row-wise response surfaces. Throws FitError when the exponential of case B
// overflows.
SurfaceValues EvaluateSurface(const SurfaceSpec& spec, const Eigen::MatrixXd& x);

// Gaussian kernel exp(-d^2 / (2 sigma^2)) of the multi-peaked surface.
double AnchorKernel(const SurfaceSpec& spec, Eigen::Index anchor,
                    const Eigen::Ref<const Eigen::RowVectorXd>& x);

// Case A: unchanged. Case B: omega set so that the mean effect over treated
// rows equals target_effect. Multi-peaked: weight differences w1 - w0 scaled
// so that the mean effect over all rows equals target_effect.
SurfaceSpec Calibrate(const SurfaceSpec& spec, const Eigen::MatrixXd& x,
                      std::span<const std::uint8_t> treatment);

enum class AssignmentMode { kRct, kConfounded };

struct AssignmentSpec {
  AssignmentMode mode = AssignmentMode::kRct;
  double rct_ratio = 0.5;
  double delta = 0.01;
  // Column carrying the only nonzero component of alpha.
  int alpha_index = -1;
  std::uint64_t seed = 0;
};

// (1 - 2 delta) sigmoid(score) + delta.
double ConfoundedPropensity(double score, double delta);

struct Assignment {
  std::vector<std::uint8_t> treatment;
  Eigen::VectorXd propensity;
};

// RCT: Bernoulli(rct_ratio). Confounded: the alpha column is standardized and
// passed through ConfoundedPropensity.
Assignment AssignTreatment(const Eigen::MatrixXd& x, const AssignmentSpec& spec);

// Encoded column with the largest absolute Pearson correlation with target.
int MostCorrelatedColumn(const Eigen::MatrixXd& x, const Eigen::VectorXd& target);

struct GroundTruth {
  Eigen::VectorXd mu0;
  Eigen::VectorXd mu1;
  Eigen::VectorXd tau;
  Eigen::VectorXd propensity;

  Eigen::Index size() const { return tau.size(); }
};

enum class OutcomeMode { kContinuous, kBinary };

struct Outcomes {
  Eigen::VectorXd y;
  GroundTruth truth;
};

// y = mu_t + N(0, noise_sd^2) in continuous mode. In binary mode mu_t is
// clipped to [0, 1] and used as a Bernoulli rate; the ground truth then holds
// the clipped rates.
Outcomes SampleOutcomes(const SurfaceValues& surfaces,
                        std::span<const std::uint8_t> treatment,
                        const Eigen::VectorXd& propensity, double noise_sd,
                        std::uint64_t seed,
                        OutcomeMode mode = OutcomeMode::kContinuous);

struct GeneratorConfig {
  std::size_t n = 20000;
  std::uint64_t seed = 0;
  SurfaceKind surface = SurfaceKind::kMultiPeaked;
  SurfaceParams surface_params;
  AssignmentMode assignment = AssignmentMode::kConfounded;
  double rct_ratio = 0.5;
  double delta = 0.01;
  double noise_sd = 1.0;
  OutcomeMode outcome_mode = OutcomeMode::kContinuous;
  EncodingParams encoding;
  CovariateParams covariates;
  // Binary mode labels: exposure rate among treated rows and conversion rate
  // among visitors.
  double exposure_rate = 0.036;
  double conversion_given_visit = 0.062;
};

struct GeneratedData {
  Dataset dataset;
  EncodedMatrix encoded;
  GroundTruth truth;
  SurfaceSpec surface;
  AssignmentSpec assignment;
};

// covariates -> encode -> surface -> alpha selection -> assignment ->
// calibration -> outcomes. Bit-identical for identical configs.
GeneratedData GenerateIteDataset(const GeneratorConfig& config);

std::string_view SurfaceKindName(SurfaceKind kind);
SurfaceKind ParseSurfaceKind(std::string_view name);
std::string_view AssignmentModeName(AssignmentMode mode);
AssignmentMode ParseAssignmentMode(std::string_view name);
std::string_view OutcomeModeName(OutcomeMode mode);
OutcomeMode ParseOutcomeMode(std::string_view name);
std::string_view AnchorDistanceName(AnchorDistance distance);
AnchorDistance ParseAnchorDistance(std::string_view name);

}  // namespace upliftbench

#endif  // UPLIFTBENCH_SYNTHGEN_H_
