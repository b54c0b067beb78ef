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

#include "upliftbench/synthgen.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Cholesky>

#include "upliftbench/errors.h"
#include "upliftbench/random.h"
#include "upliftbench/stats.h"

namespace upliftbench {
namespace {

// log(DBL_MAX); larger exponents overflow.
constexpr double kMaxExponent = 709.78;

Eigen::VectorXd SampleFromSupport(Eigen::Index d, const std::vector<double>& support,
                                  const std::vector<double>& probs, Rng& rng) {
  if (support.empty() || support.size() != probs.size()) {
    throw ConfigError("coefficient support and probabilities must match in size");
  }
  std::discrete_distribution<std::size_t> pick(probs.begin(), probs.end());
  Eigen::VectorXd beta(d);
  for (Eigen::Index j = 0; j < d; ++j) beta[j] = support[pick(rng)];
  return beta;
}

double SquaredDistance(const SurfaceSpec& spec, Eigen::Index anchor,
                       const Eigen::Ref<const Eigen::RowVectorXd>& x) {
  const double d2 = (x - spec.anchors.row(anchor)).squaredNorm();
  if (spec.distance == AnchorDistance::kRootMeanSquare) {
    return d2 / static_cast<double>(x.size());
  }
  return d2;
}

void CheckDims(const SurfaceSpec& spec, const Eigen::MatrixXd& x) {
  if (spec.kind == SurfaceKind::kMultiPeaked) {
    const Eigen::Index a = spec.anchors.rows();
    if (spec.w0.size() != a || spec.w1.size() != a || spec.sigmas.size() != a) {
      throw ConfigError("multi-peaked surface: anchors, weights and widths differ in count");
    }
    if (a > 0 && spec.anchors.cols() != x.cols()) {
      throw ConfigError("multi-peaked surface: anchor dimension " +
                        std::to_string(spec.anchors.cols()) + " != data dimension " +
                        std::to_string(x.cols()));
    }
    if ((spec.sigmas.array() <= 0.0).any()) {
      throw ConfigError("multi-peaked surface: widths must be positive");
    }
  } else if (spec.beta.size() != x.cols()) {
    throw ConfigError("surface: beta has " + std::to_string(spec.beta.size()) +
                      " components for " + std::to_string(x.cols()) + " columns");
  }
}

// Effect of the multi-peaked surface before any calibration, row-wise.
Eigen::VectorXd KernelEffect(const SurfaceSpec& spec, const Eigen::MatrixXd& x) {
  Eigen::VectorXd tau = Eigen::VectorXd::Zero(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index c = 0; c < spec.anchors.rows(); ++c) {
      tau[i] += (spec.w1[c] - spec.w0[c]) * AnchorKernel(spec, c, x.row(i));
    }
  }
  return tau;
}

}  // namespace

Dataset GenerateCovariates(std::size_t n, std::uint64_t seed,
                           const CovariateParams& params) {
  if (n == 0) throw ConfigError("covariates: n must be >= 1");
  Eigen::Matrix4d cov = Eigen::Matrix4d::Constant(params.correlation);
  cov.diagonal().setOnes();
  Eigen::LLT<Eigen::Matrix4d> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw ConfigError("covariates: correlation matrix is not positive definite");
  }
  const Eigen::Matrix4d chol = llt.matrixL();

  Rng rng = MakeRng(seed, 0);
  std::normal_distribution<double> normal;
  std::vector<std::discrete_distribution<std::int64_t>> codes;
  for (std::int64_t cardinality : kCategoricalCardinalities) {
    std::vector<double> w(static_cast<std::size_t>(cardinality));
    for (std::size_t k = 0; k < w.size(); ++k) {
      w[k] = std::pow(static_cast<double>(k + 1), -params.zipf_exponent);
    }
    codes.emplace_back(w.begin(), w.end());
  }

  std::vector<Sample> samples(n);
  for (Sample& s : samples) {
    Eigen::Vector4d z;
    for (int j = 0; j < kNumContinuous; ++j) z[j] = normal(rng);
    const Eigen::Vector4d x = chol * z;
    for (int j = 0; j < kNumContinuous; ++j) s.continuous[j] = x[j];
    for (int j = 0; j < kNumCategorical; ++j) s.categorical[j] = codes[j](rng);
  }
  return Dataset(std::move(samples));
}

SurfaceSpec SampleSurface(SurfaceKind kind, const EncodedMatrix& encoded,
                          const SurfaceParams& params, std::uint64_t seed) {
  Rng rng = MakeRng(seed, 0);
  SurfaceSpec spec;
  spec.kind = kind;
  spec.seed = seed;
  spec.target_effect = params.target_effect;
  spec.distance = params.distance;
  const Eigen::Index d = encoded.dims();
  switch (kind) {
    case SurfaceKind::kCaseA:
      spec.beta = SampleFromSupport(d, params.case_a_support, params.case_a_probs, rng);
      break;
    case SurfaceKind::kCaseB:
      spec.beta = SampleFromSupport(d, params.case_b_support, params.case_b_probs, rng);
      spec.offset = params.case_b_offset;
      break;
    case SurfaceKind::kMultiPeaked: {
      const auto n = static_cast<std::size_t>(encoded.rows());
      const auto a = static_cast<std::size_t>(params.n_anchors);
      if (params.n_anchors < 1 || a > n) {
        throw ConfigError("multi-peaked surface: need 1 <= n_anchors <= n");
      }
      if (!(params.sigma > 0.0)) {
        throw ConfigError("multi-peaked surface: sigma must be positive");
      }
      std::vector<std::size_t> rows(n);
      std::iota(rows.begin(), rows.end(), 0);
      // Partial Fisher-Yates: the first a entries are a uniform sample.
      for (std::size_t i = 0; i < a; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, n - 1);
        std::swap(rows[i], rows[pick(rng)]);
      }
      spec.anchors.resize(params.n_anchors, d);
      for (std::size_t i = 0; i < a; ++i) {
        spec.anchors.row(static_cast<Eigen::Index>(i)) =
            encoded.values().row(static_cast<Eigen::Index>(rows[i]));
      }
      std::uniform_real_distribution<double> weight(0.0, params.weight_scale);
      spec.w0.resize(params.n_anchors);
      spec.w1.resize(params.n_anchors);
      for (Eigen::Index c = 0; c < params.n_anchors; ++c) {
        spec.w0[c] = weight(rng);
        spec.w1[c] = weight(rng);
      }
      spec.sigmas = Eigen::VectorXd::Constant(params.n_anchors, params.sigma);
      break;
    }
  }
  return spec;
}

double AnchorKernel(const SurfaceSpec& spec, Eigen::Index anchor,
                    const Eigen::Ref<const Eigen::RowVectorXd>& x) {
  const double sigma = spec.sigmas[anchor];
  return std::exp(-SquaredDistance(spec, anchor, x) / (2.0 * sigma * sigma));
}

SurfaceValues EvaluateSurface(const SurfaceSpec& spec, const Eigen::MatrixXd& x) {
  CheckDims(spec, x);
  SurfaceValues out;
  switch (spec.kind) {
    case SurfaceKind::kCaseA:
      out.mu0 = x * spec.beta;
      out.mu1 = out.mu0.array() + spec.target_effect;
      break;
    case SurfaceKind::kCaseB: {
      const Eigen::VectorXd linear = x * spec.beta;
      const double shift = spec.offset * spec.beta.sum();
      out.mu0.resize(x.rows());
      for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const double exponent = linear[i] + shift;
        if (exponent > kMaxExponent) {
          throw FitError("case B surface overflows at row " + std::to_string(i) +
                         " (exponent " + std::to_string(exponent) +
                         "); scale beta down");
        }
        out.mu0[i] = std::exp(exponent);
      }
      out.mu1 = linear.array() - spec.omega;
      break;
    }
    case SurfaceKind::kMultiPeaked:
      out.mu0 = Eigen::VectorXd::Zero(x.rows());
      out.mu1 = Eigen::VectorXd::Zero(x.rows());
      for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index c = 0; c < spec.anchors.rows(); ++c) {
          const double k = AnchorKernel(spec, c, x.row(i));
          out.mu0[i] += spec.w0[c] * k;
          out.mu1[i] += spec.w1[c] * k;
        }
      }
      break;
  }
  return out;
}

SurfaceSpec Calibrate(const SurfaceSpec& spec, const Eigen::MatrixXd& x,
                      std::span<const std::uint8_t> treatment) {
  CheckDims(spec, x);
  SurfaceSpec out = spec;
  switch (spec.kind) {
    case SurfaceKind::kCaseA:
      break;
    case SurfaceKind::kCaseB: {
      if (treatment.size() != static_cast<std::size_t>(x.rows())) {
        throw DataError("calibrate: treatment length does not match data");
      }
      SurfaceSpec zero = spec;
      zero.omega = 0.0;
      const SurfaceValues v = EvaluateSurface(zero, x);
      double sum = 0.0;
      std::size_t treated = 0;
      for (Eigen::Index i = 0; i < x.rows(); ++i) {
        if (treatment[static_cast<std::size_t>(i)]) {
          sum += v.mu1[i] - v.mu0[i];
          ++treated;
        }
      }
      if (treated == 0) throw DataError("calibrate: case B needs treated rows");
      // mu1 - mu0 decreases one-for-one in omega.
      out.omega = sum / static_cast<double>(treated) - spec.target_effect;
      break;
    }
    case SurfaceKind::kMultiPeaked: {
      const Eigen::VectorXd tau = KernelEffect(spec, x);
      const double mean = tau.mean();
      if (!std::isfinite(mean) || mean == 0.0) {
        throw FitError("calibrate: multi-peaked surface has zero mean effect; "
                       "calibration impossible");
      }
      const double scale = spec.target_effect / mean;
      out.w1 = spec.w0 + scale * (spec.w1 - spec.w0);
      break;
    }
  }
  return out;
}

double ConfoundedPropensity(double score, double delta) {
  return (1.0 - 2.0 * delta) / (1.0 + std::exp(-score)) + delta;
}

Assignment AssignTreatment(const Eigen::MatrixXd& x, const AssignmentSpec& spec) {
  const Eigen::Index n = x.rows();
  Assignment out;
  out.treatment.resize(static_cast<std::size_t>(n));
  out.propensity.resize(n);
  Rng rng = MakeRng(spec.seed, 0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  if (spec.mode == AssignmentMode::kRct) {
    if (!(spec.rct_ratio > 0.0 && spec.rct_ratio < 1.0)) {
      throw ConfigError("assignment: rct_ratio must lie in (0, 1)");
    }
    out.propensity.setConstant(spec.rct_ratio);
  } else {
    if (!(spec.delta > 0.0 && spec.delta < 0.5)) {
      throw ConfigError("assignment: delta must lie in (0, 0.5)");
    }
    if (spec.alpha_index < 0 || spec.alpha_index >= x.cols()) {
      throw ConfigError("assignment: alpha_index " + std::to_string(spec.alpha_index) +
                        " outside [0, " + std::to_string(x.cols()) + ")");
    }
    const Eigen::VectorXd column = x.col(spec.alpha_index);
    const double mean = column.mean();
    const double sd = std::sqrt((column.array() - mean).square().mean());
    if (!(sd > 0.0)) {
      throw DataError("assignment: confounding column " +
                      std::to_string(spec.alpha_index) + " is constant");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      out.propensity[i] = ConfoundedPropensity((column[i] - mean) / sd, spec.delta);
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    out.treatment[static_cast<std::size_t>(i)] =
        uniform(rng) < out.propensity[i] ? 1 : 0;
  }
  return out;
}

int MostCorrelatedColumn(const Eigen::MatrixXd& x, const Eigen::VectorXd& target) {
  if (target.size() != x.rows()) {
    throw DataError("MostCorrelatedColumn: length mismatch");
  }
  int best = 0;
  double best_corr = -1.0;
  const std::span<const double> y(target.data(), static_cast<std::size_t>(target.size()));
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double corr = std::abs(stats::PearsonCorrelation(
        std::span<const double>(x.col(j).data(), static_cast<std::size_t>(x.rows())), y));
    if (corr > best_corr) {
      best_corr = corr;
      best = static_cast<int>(j);
    }
  }
  return best;
}

Outcomes SampleOutcomes(const SurfaceValues& surfaces,
                        std::span<const std::uint8_t> treatment,
                        const Eigen::VectorXd& propensity, double noise_sd,
                        std::uint64_t seed, OutcomeMode mode) {
  const Eigen::Index n = surfaces.mu0.size();
  if (surfaces.mu1.size() != n || propensity.size() != n ||
      treatment.size() != static_cast<std::size_t>(n)) {
    throw DataError("SampleOutcomes: length mismatch");
  }
  if (!(noise_sd >= 0.0)) throw ConfigError("noise_sd must be >= 0");
  Outcomes out;
  out.truth.mu0 = surfaces.mu0;
  out.truth.mu1 = surfaces.mu1;
  if (mode == OutcomeMode::kBinary) {
    out.truth.mu0 = out.truth.mu0.cwiseMax(0.0).cwiseMin(1.0);
    out.truth.mu1 = out.truth.mu1.cwiseMax(0.0).cwiseMin(1.0);
  }
  out.truth.tau = out.truth.mu1 - out.truth.mu0;
  out.truth.propensity = propensity;
  out.y.resize(n);
  Rng rng = MakeRng(seed, 0);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    const bool treated = treatment[static_cast<std::size_t>(i)] != 0;
    const double mu = treated ? out.truth.mu1[i] : out.truth.mu0[i];
    if (mode == OutcomeMode::kBinary) {
      out.y[i] = uniform(rng) < mu ? 1.0 : 0.0;
    } else {
      const double eps = normal(rng);
      out.y[i] = noise_sd == 0.0 ? mu : mu + noise_sd * eps;
    }
  }
  return out;
}

GeneratedData GenerateIteDataset(const GeneratorConfig& config) {
  const Dataset covariates =
      GenerateCovariates(config.n, DeriveSeed(config.seed, 1), config.covariates);
  EncodedMatrix encoded = Encode(covariates, config.encoding);
  const Eigen::MatrixXd& x = encoded.values();

  SurfaceSpec surface = SampleSurface(config.surface, encoded, config.surface_params,
                                      DeriveSeed(config.seed, 2));
  const SurfaceValues initial = EvaluateSurface(surface, x);
  const Eigen::VectorXd mean_surface = 0.5 * (initial.mu0 + initial.mu1);

  AssignmentSpec assignment;
  assignment.mode = config.assignment;
  assignment.rct_ratio = config.rct_ratio;
  assignment.delta = config.delta;
  assignment.alpha_index = MostCorrelatedColumn(x, mean_surface);
  assignment.seed = DeriveSeed(config.seed, 3);
  const Assignment assigned = AssignTreatment(x, assignment);

  surface = Calibrate(surface, x, assigned.treatment);
  const SurfaceValues values = EvaluateSurface(surface, x);
  Outcomes outcomes =
      SampleOutcomes(values, assigned.treatment, assigned.propensity, config.noise_sd,
                     DeriveSeed(config.seed, 4), config.outcome_mode);

  Rng rng = MakeRng(DeriveSeed(config.seed, 5), 0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<Sample> samples(covariates.samples().begin(), covariates.samples().end());
  std::vector<double> y;
  const bool binary = config.outcome_mode == OutcomeMode::kBinary;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    Sample& s = samples[i];
    const auto row = static_cast<Eigen::Index>(i);
    s.treatment = assigned.treatment[i];
    const double exposure_draw = uniform(rng);
    const double conversion_draw = uniform(rng);
    s.exposure = s.treatment && exposure_draw < config.exposure_rate ? 1 : 0;
    if (binary) {
      s.visit = outcomes.y[row] > 0.5 ? 1 : 0;
      s.conversion = s.visit && conversion_draw < config.conversion_given_visit ? 1 : 0;
    }
  }
  if (!binary) y.assign(outcomes.y.data(), outcomes.y.data() + outcomes.y.size());

  GeneratedData out;
  out.dataset = Dataset(std::move(samples), {}, std::move(y));
  out.encoded = std::move(encoded);
  out.truth = std::move(outcomes.truth);
  out.surface = std::move(surface);
  out.assignment = assignment;
  return out;
}

std::string_view SurfaceKindName(SurfaceKind kind) {
  switch (kind) {
    case SurfaceKind::kCaseA:
      return "case_a";
    case SurfaceKind::kCaseB:
      return "case_b";
    case SurfaceKind::kMultiPeaked:
      return "multi_peaked";
  }
  return "unknown";
}

SurfaceKind ParseSurfaceKind(std::string_view name) {
  if (name == "case_a" || name == "A") return SurfaceKind::kCaseA;
  if (name == "case_b" || name == "B") return SurfaceKind::kCaseB;
  if (name == "multi_peaked" || name == "multipeaked") return SurfaceKind::kMultiPeaked;
  throw ConfigError("unknown surface kind '" + std::string(name) + "'");
}

std::string_view AssignmentModeName(AssignmentMode mode) {
  return mode == AssignmentMode::kRct ? "rct" : "confounded";
}

AssignmentMode ParseAssignmentMode(std::string_view name) {
  if (name == "rct") return AssignmentMode::kRct;
  if (name == "confounded") return AssignmentMode::kConfounded;
  throw ConfigError("unknown assignment mode '" + std::string(name) + "'");
}

std::string_view OutcomeModeName(OutcomeMode mode) {
  return mode == OutcomeMode::kContinuous ? "continuous" : "binary";
}

OutcomeMode ParseOutcomeMode(std::string_view name) {
  if (name == "continuous") return OutcomeMode::kContinuous;
  if (name == "binary") return OutcomeMode::kBinary;
  throw ConfigError("unknown outcome mode '" + std::string(name) + "'");
}

std::string_view AnchorDistanceName(AnchorDistance distance) {
  return distance == AnchorDistance::kEuclidean ? "euclidean" : "rms";
}

AnchorDistance ParseAnchorDistance(std::string_view name) {
  if (name == "euclidean") return AnchorDistance::kEuclidean;
  if (name == "rms") return AnchorDistance::kRootMeanSquare;
  throw ConfigError("unknown anchor distance '" + std::string(name) + "'");
}

}  // namespace upliftbench
