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

#include "upliftbench/uplift_learners.h"

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <string>
#include <utility>

#include "upliftbench/errors.h"
#include "upliftbench/splitting.h"

namespace upliftbench {
namespace {

using Rows = std::vector<Eigen::Index>;

struct Arms {
  Rows treated;
  Rows control;
};

Arms SplitArms(const Eigen::VectorXd& t, std::span<const std::size_t> subset = {}) {
  Arms arms;
  auto add = [&](Eigen::Index i) {
    (t[i] == 1.0 ? arms.treated : arms.control).push_back(i);
  };
  if (subset.empty()) {
    for (Eigen::Index i = 0; i < t.size(); ++i) add(i);
  } else {
    for (std::size_t i : subset) add(static_cast<Eigen::Index>(i));
  }
  return arms;
}

void CheckInputs(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                 const Eigen::VectorXd& t) {
  if (x.rows() != y.size() || x.rows() != t.size()) {
    throw DataError("x, y and t differ in length");
  }
  if (!IsBinary(t)) throw DataError("treatment must be 0/1");
}

Arms CheckedArms(const Eigen::VectorXd& t) {
  Arms arms = SplitArms(t);
  if (arms.treated.empty()) throw DataError("treated arm is empty");
  if (arms.control.empty()) throw DataError("control arm is empty");
  return arms;
}

void CheckBinaryOutcome(const Eigen::VectorXd& y, std::string_view method) {
  if (!IsBinary(y)) {
    throw DataError(std::string(method) + " needs a binary outcome");
  }
}

LinearModel FitOn(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Rows& rows,
                  const BaseLearnerConfig& config) {
  return FitBase(x(rows, Eigen::all), y(rows), config);
}

Eigen::VectorXd Clip(Eigen::VectorXd e) {
  return e.cwiseMax(kPropensityClip).cwiseMin(1.0 - kPropensityClip);
}

// Out-of-fold nuisance predictions for the R- and DR-learners.
struct Nuisances {
  Eigen::VectorXd mean;
  Eigen::VectorXd mu0;
  Eigen::VectorXd mu1;
  Eigen::VectorXd propensity;
};

Nuisances CrossFit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                   const Eigen::VectorXd& t, const MetaLearnerConfig& config,
                   bool per_arm) {
  if (config.cross_fit_folds < 2) throw ConfigError("cross_fit_folds must be >= 2");
  std::vector<int> strata(static_cast<std::size_t>(t.size()));
  for (Eigen::Index i = 0; i < t.size(); ++i) strata[i] = static_cast<int>(t[i]);
  const auto folds = StratifiedKFoldIndices(strata, config.cross_fit_folds, config.seed);

  const Eigen::Index n = x.rows();
  Nuisances out;
  out.propensity.resize(n);
  if (per_arm) {
    out.mu0.resize(n);
    out.mu1.resize(n);
  } else {
    out.mean.resize(n);
  }
  for (const IndexSplit& fold : folds) {
    const Rows train(fold.train.begin(), fold.train.end());
    const Rows held(fold.test.begin(), fold.test.end());
    const auto x_held = x(held, Eigen::all);
    const Arms arms = SplitArms(t, fold.train);
    if (arms.treated.empty() || arms.control.empty()) {
      throw DataError("cross-fitting fold has an empty treatment arm");
    }
    out.propensity(held) =
        Clip(FitOn(x, t, train, config.propensity).Predict(x_held));
    if (per_arm) {
      out.mu0(held) = FitOn(x, y, arms.control, config.outcome).Predict(x_held);
      out.mu1(held) = FitOn(x, y, arms.treated, config.outcome).Predict(x_held);
    } else {
      out.mean(held) = FitOn(x, y, train, config.outcome).Predict(x_held);
    }
  }
  return out;
}

}  // namespace

UpliftScorer::UpliftScorer(UpliftMethod method, MetaLearnerConfig config,
                           double treatment_ratio, std::vector<ScorerBlock> blocks,
                           std::optional<double> constant_propensity)
    : method_(method),
      config_(std::move(config)),
      treatment_ratio_(treatment_ratio),
      blocks_(std::move(blocks)),
      constant_propensity_(constant_propensity) {}

const LinearModel& UpliftScorer::block(std::string_view name) const {
  for (const ScorerBlock& b : blocks_) {
    if (b.name == name) return b.model;
  }
  throw std::out_of_range("scorer has no block '" + std::string(name) + "'");
}

Eigen::VectorXd UpliftScorer::Score(const Eigen::MatrixXd& x) const {
  switch (method_) {
    case UpliftMethod::kTwoModel:
    case UpliftMethod::kTLearner:
      return block("m1").Predict(x) - block("m0").Predict(x);
    case UpliftMethod::kCvt:
      return (2.0 * block("g").Predict(x).array() - 1.0).matrix();
    case UpliftMethod::kMom:
    case UpliftMethod::kRLearner:
    case UpliftMethod::kDrLearner:
      return block("tau").Predict(x);
    case UpliftMethod::kSdr: {
      const Eigen::Index n = x.rows();
      const Eigen::Index d = x.cols();
      Eigen::MatrixXd treated(n, 2 * d + 1);
      treated << x, x, Eigen::VectorXd::Ones(n);
      Eigen::MatrixXd control = Eigen::MatrixXd::Zero(n, 2 * d + 1);
      control.leftCols(d) = x;
      const LinearModel& m = block("sdr");
      return m.Predict(treated) - m.Predict(control);
    }
    case UpliftMethod::kXLearner: {
      const Eigen::VectorXd tau0 = block("tau0").Predict(x);
      const Eigen::VectorXd tau1 = block("tau1").Predict(x);
      const Eigen::VectorXd g =
          constant_propensity_
              ? Eigen::VectorXd::Constant(x.rows(), *constant_propensity_)
              : block("e").Predict(x);
      return (g.array() * tau0.array() + (1.0 - g.array()) * tau1.array()).matrix();
    }
  }
  throw Error("unknown uplift method");
}

UpliftScorer FitTwoModel(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                         const Eigen::VectorXd& t, const MetaLearnerConfig& config) {
  CheckInputs(x, y, t);
  const Arms arms = CheckedArms(t);
  std::vector<ScorerBlock> blocks;
  blocks.push_back({"m0", FitOn(x, y, arms.control, config.outcome)});
  blocks.push_back({"m1", FitOn(x, y, arms.treated, config.outcome)});
  return UpliftScorer(UpliftMethod::kTwoModel, config, t.mean(), std::move(blocks));
}

UpliftScorer FitTLearner(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                         const Eigen::VectorXd& t, const MetaLearnerConfig& config) {
  const UpliftScorer tm = FitTwoModel(x, y, t, config);
  return UpliftScorer(UpliftMethod::kTLearner, config, tm.treatment_ratio(), tm.blocks());
}

double CvtLabel(double t, double y) { return t * y + (1.0 - t) * (1.0 - y); }

UpliftScorer FitCvt(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                    const Eigen::VectorXd& t, const MetaLearnerConfig& config) {
  CheckInputs(x, y, t);
  CheckBinaryOutcome(y, "CVT");
  CheckedArms(t);
  const double e = t.mean();
  Eigen::VectorXd z(y.size());
  Eigen::VectorXd w(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    z[i] = CvtLabel(t[i], y[i]);
    w[i] = !config.cvt_weighted ? 1.0
           : t[i] == 1.0        ? 1.0 / (2.0 * e)
                                : 1.0 / (2.0 * (1.0 - e));
  }
  BaseLearnerConfig base = config.outcome;
  base.kind = BaseKind::kLogistic;
  std::vector<ScorerBlock> blocks;
  blocks.push_back({"g", FitLogistic(x, z, base, &w).model});
  return UpliftScorer(UpliftMethod::kCvt, config, e, std::move(blocks));
}

double ModifiedOutcome(double t, double y, double treatment_ratio) {
  return y * t / treatment_ratio - y * (1.0 - t) / (1.0 - treatment_ratio);
}

UpliftScorer FitMom(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                    const Eigen::VectorXd& t, const MetaLearnerConfig& config) {
  CheckInputs(x, y, t);
  const double e = t.mean();
  if (!(e > 0.0 && e < 1.0)) {
    throw DataError("MOM needs a treatment ratio strictly between 0 and 1");
  }
  Eigen::VectorXd target(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) target[i] = ModifiedOutcome(t[i], y[i], e);
  std::vector<ScorerBlock> blocks;
  blocks.push_back({"tau", FitRidge(x, target, config.effect.l2)});
  return UpliftScorer(UpliftMethod::kMom, config, e, std::move(blocks));
}

Eigen::MatrixXd SdrDesign(const Eigen::MatrixXd& x, const Eigen::VectorXd& t) {
  if (t.size() != x.rows()) throw DataError("SdrDesign: length mismatch");
  Eigen::MatrixXd design(x.rows(), 2 * x.cols() + 1);
  design << x, t.asDiagonal() * x, t;
  return design;
}

UpliftScorer FitSdr(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                    const Eigen::VectorXd& t, const MetaLearnerConfig& config) {
  CheckInputs(x, y, t);
  CheckBinaryOutcome(y, "SDR");
  CheckedArms(t);
  if (!(config.sdr_lambda > 0.0)) throw ConfigError("sdr_lambda must be > 0");
  const Eigen::Index d = x.cols();
  Eigen::VectorXd penalty = Eigen::VectorXd::Ones(2 * d + 1);
  penalty.segment(d, d).setConstant(1.0 / config.sdr_lambda);
  BaseLearnerConfig base = config.outcome;
  base.kind = BaseKind::kLogistic;
  std::vector<ScorerBlock> blocks;
  blocks.push_back({"sdr", FitLogistic(SdrDesign(x, t), y, base, nullptr, &penalty).model});
  return UpliftScorer(UpliftMethod::kSdr, config, t.mean(), std::move(blocks));
}

UpliftScorer FitXLearner(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                         const Eigen::VectorXd& t, const MetaLearnerConfig& config) {
  CheckInputs(x, y, t);
  const Arms arms = CheckedArms(t);
  const LinearModel mu0 = FitOn(x, y, arms.control, config.outcome);
  const LinearModel mu1 = FitOn(x, y, arms.treated, config.outcome);

  const auto x1 = x(arms.treated, Eigen::all);
  const auto x0 = x(arms.control, Eigen::all);
  const Eigen::VectorXd d1 = y(arms.treated) - mu0.Predict(x1);
  const Eigen::VectorXd d0 = mu1.Predict(x0) - y(arms.control);

  std::vector<ScorerBlock> blocks;
  blocks.push_back({"m0", mu0});
  blocks.push_back({"m1", mu1});
  blocks.push_back({"tau0", FitBase(x0, d0, config.effect)});
  blocks.push_back({"tau1", FitBase(x1, d1, config.effect)});
  std::optional<double> constant;
  if (config.x_propensity == PropensityMode::kConstant) {
    constant = config.constant_propensity.value_or(t.mean());
  } else {
    blocks.push_back({"e", FitBase(x, t, config.propensity)});
  }
  return UpliftScorer(UpliftMethod::kXLearner, config, t.mean(), std::move(blocks),
                      constant);
}

WeightedTargets RLearnerTargets(const Eigen::VectorXd& y, const Eigen::VectorXd& t,
                                const Eigen::VectorXd& mean_hat,
                                const Eigen::VectorXd& propensity_hat) {
  const Eigen::Index n = y.size();
  if (t.size() != n || mean_hat.size() != n || propensity_hat.size() != n) {
    throw DataError("RLearnerTargets: length mismatch");
  }
  WeightedTargets out{Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = t[i] - propensity_hat[i];
    if (r == 0.0) continue;
    out.target[i] = (y[i] - mean_hat[i]) / r;
    out.weight[i] = r * r;
  }
  return out;
}

UpliftScorer FitRLearner(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                         const Eigen::VectorXd& t, const MetaLearnerConfig& config) {
  CheckInputs(x, y, t);
  CheckedArms(t);
  const Nuisances nuisances = CrossFit(x, y, t, config, /*per_arm=*/false);
  const WeightedTargets targets =
      RLearnerTargets(y, t, nuisances.mean, nuisances.propensity);
  if ((targets.weight.array() < 1e-12).all()) {
    throw FitError("R-learner: every weight is below 1e-12; effect not identified");
  }
  std::vector<ScorerBlock> blocks;
  blocks.push_back({"tau", FitRidge(x, targets.target, config.effect.l2, &targets.weight)});
  return UpliftScorer(UpliftMethod::kRLearner, config, t.mean(), std::move(blocks));
}

Eigen::VectorXd DrPseudoOutcome(const Eigen::VectorXd& y, const Eigen::VectorXd& t,
                                const Eigen::VectorXd& mu0_hat,
                                const Eigen::VectorXd& mu1_hat,
                                const Eigen::VectorXd& propensity_hat) {
  const Eigen::Index n = y.size();
  if (t.size() != n || mu0_hat.size() != n || mu1_hat.size() != n ||
      propensity_hat.size() != n) {
    throw DataError("DrPseudoOutcome: length mismatch");
  }
  const Eigen::VectorXd e = Clip(propensity_hat);
  Eigen::VectorXd phi(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    phi[i] = mu1_hat[i] - mu0_hat[i] + t[i] * (y[i] - mu1_hat[i]) / e[i] -
             (1.0 - t[i]) * (y[i] - mu0_hat[i]) / (1.0 - e[i]);
  }
  return phi;
}

UpliftScorer FitDrLearner(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                          const Eigen::VectorXd& t, const MetaLearnerConfig& config) {
  CheckInputs(x, y, t);
  CheckedArms(t);
  const Nuisances nuisances = CrossFit(x, y, t, config, /*per_arm=*/true);
  const Eigen::VectorXd phi =
      DrPseudoOutcome(y, t, nuisances.mu0, nuisances.mu1, nuisances.propensity);
  std::vector<ScorerBlock> blocks;
  blocks.push_back({"tau", FitRidge(x, phi, config.effect.l2)});
  return UpliftScorer(UpliftMethod::kDrLearner, config, t.mean(), std::move(blocks));
}

UpliftScorer FitUplift(UpliftMethod method, const Eigen::MatrixXd& x,
                       const Eigen::VectorXd& y, const Eigen::VectorXd& t,
                       const MetaLearnerConfig& config) {
  switch (method) {
    case UpliftMethod::kTwoModel:
      return FitTwoModel(x, y, t, config);
    case UpliftMethod::kCvt:
      return FitCvt(x, y, t, config);
    case UpliftMethod::kMom:
      return FitMom(x, y, t, config);
    case UpliftMethod::kSdr:
      return FitSdr(x, y, t, config);
    case UpliftMethod::kTLearner:
      return FitTLearner(x, y, t, config);
    case UpliftMethod::kXLearner:
      return FitXLearner(x, y, t, config);
    case UpliftMethod::kRLearner:
      return FitRLearner(x, y, t, config);
    case UpliftMethod::kDrLearner:
      return FitDrLearner(x, y, t, config);
  }
  throw Error("unknown uplift method");
}

bool RequiresBinaryOutcome(UpliftMethod method) {
  return method == UpliftMethod::kCvt || method == UpliftMethod::kSdr;
}

std::string_view UpliftMethodName(UpliftMethod method) {
  switch (method) {
    case UpliftMethod::kTwoModel:
      return "tm";
    case UpliftMethod::kCvt:
      return "cvt";
    case UpliftMethod::kMom:
      return "mom";
    case UpliftMethod::kSdr:
      return "sdr";
    case UpliftMethod::kTLearner:
      return "t_learner";
    case UpliftMethod::kXLearner:
      return "x_learner";
    case UpliftMethod::kRLearner:
      return "r_learner";
    case UpliftMethod::kDrLearner:
      return "dr_learner";
  }
  return "unknown";
}

UpliftMethod ParseUpliftMethod(std::string_view name) {
  std::string key(name);
  std::transform(key.begin(), key.end(), key.begin(),
                 [](unsigned char c) { return c == '-' ? '_' : std::tolower(c); });
  if (key == "tm" || key == "two_model") return UpliftMethod::kTwoModel;
  if (key == "cvt") return UpliftMethod::kCvt;
  if (key == "mom") return UpliftMethod::kMom;
  if (key == "sdr") return UpliftMethod::kSdr;
  if (key == "t_learner" || key == "t") return UpliftMethod::kTLearner;
  if (key == "x_learner" || key == "x") return UpliftMethod::kXLearner;
  if (key == "r_learner" || key == "r") return UpliftMethod::kRLearner;
  if (key == "dr_learner" || key == "dr") return UpliftMethod::kDrLearner;
  throw ConfigError("unknown method '" + std::string(name) + "'");
}

}  // namespace upliftbench
