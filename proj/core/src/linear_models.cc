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

#include "upliftbench/linear_models.h"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Cholesky>

#include "upliftbench/errors.h"

namespace upliftbench {
namespace {

// log(1 + exp(z)) without overflow.
double Softplus(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

void CheckShapes(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                 const Eigen::VectorXd* weights) {
  if (x.rows() == 0) throw DataError("cannot fit on zero rows");
  if (y.size() != x.rows()) {
    throw DataError("x has " + std::to_string(x.rows()) + " rows but y has " +
                    std::to_string(y.size()));
  }
  if (weights != nullptr) {
    if (weights->size() != x.rows()) throw DataError("sample weight length mismatch");
    if ((weights->array() < 0.0).any()) throw DataError("sample weights must be >= 0");
  }
}

}  // namespace

void CheckConfig(const BaseLearnerConfig& config) {
  if (!(config.l2 >= 0.0)) throw ConfigError("l2 must be >= 0");
  if (!(config.tol > 0.0)) throw ConfigError("tol must be > 0");
  if (config.max_iters < 1) throw ConfigError("max_iters must be >= 1");
}

double Sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

Eigen::VectorXd LinearModel::Linear(const Eigen::MatrixXd& x) const {
  if (x.cols() != weights.size()) {
    throw DataError("model expects " + std::to_string(weights.size()) +
                    " columns, got " + std::to_string(x.cols()));
  }
  return (x * weights).array() + intercept;
}

Eigen::VectorXd LinearModel::Predict(const Eigen::MatrixXd& x) const {
  Eigen::VectorXd z = Linear(x);
  if (kind == BaseKind::kLogistic) {
    for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = Sigmoid(z[i]);
  }
  return z;
}

LinearModel FitRidge(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double l2,
                     const Eigen::VectorXd* sample_weights,
                     const RidgeOptions& options) {
  CheckShapes(x, y, sample_weights);
  if (!(l2 >= 0.0)) throw ConfigError("l2 must be >= 0");
  const Eigen::Index d = x.cols();
  const Eigen::VectorXd v =
      sample_weights ? *sample_weights : Eigen::VectorXd::Ones(x.rows());
  const double total = v.sum();
  if (!(total > 0.0)) throw FitError("ridge: all sample weights are zero");

  Eigen::RowVectorXd x_mean = Eigen::RowVectorXd::Zero(d);
  double y_mean = 0.0;
  if (options.fit_intercept) {
    x_mean = (v.transpose() * x) / total;
    y_mean = v.dot(y) / total;
  }
  const Eigen::MatrixXd xc = x.rowwise() - x_mean;
  const Eigen::VectorXd yc = y.array() - y_mean;

  LinearModel model;
  model.kind = BaseKind::kRidge;
  model.weights = Eigen::VectorXd::Zero(d);
  if (d > 0) {
    Eigen::MatrixXd gram = xc.transpose() * v.asDiagonal() * xc;
    gram.diagonal().array() += l2;
    const Eigen::VectorXd rhs = xc.transpose() * (v.array() * yc.array()).matrix();
    Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    const Eigen::VectorXd diag = ldlt.vectorD();
    const double scale = std::max(diag.cwiseAbs().maxCoeff(), 1.0);
    if (ldlt.info() != Eigen::Success || diag.minCoeff() <= 1e-12 * scale) {
      throw FitError("ridge: normal equations are singular; use l2 > 0");
    }
    model.weights = ldlt.solve(rhs);
  }
  model.intercept = options.fit_intercept ? y_mean - x_mean.dot(model.weights) : 0.0;
  return model;
}

LogisticObjective::LogisticObjective(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                     double l2, const Eigen::VectorXd* sample_weights,
                                     const Eigen::VectorXd* penalty_scale)
    : x_(x), y_(y), l2_(l2) {
  CheckShapes(x, y, sample_weights);
  sample_weights_ = sample_weights ? *sample_weights : Eigen::VectorXd::Ones(x.rows());
  penalty_scale_ = penalty_scale ? *penalty_scale : Eigen::VectorXd::Ones(x.cols());
  if (penalty_scale_.size() != x.cols()) {
    throw DataError("penalty scale length mismatch");
  }
}

double LogisticObjective::Value(const Eigen::VectorXd& theta) const {
  return Evaluate(theta, nullptr);
}

double LogisticObjective::ValueAndGradient(const Eigen::VectorXd& theta,
                                           Eigen::VectorXd* gradient) const {
  return Evaluate(theta, gradient);
}

double LogisticObjective::Evaluate(const Eigen::VectorXd& theta,
                                   Eigen::VectorXd* gradient) const {
  const Eigen::Index d = x_.cols();
  const auto n = static_cast<double>(x_.rows());
  const auto w = theta.head(d);
  const double b = theta[d];
  const Eigen::VectorXd z = (x_ * w).array() + b;
  double loss = 0.0;
  Eigen::VectorXd residual(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    loss += sample_weights_[i] * (Softplus(z[i]) - y_[i] * z[i]);
    residual[i] = sample_weights_[i] * (Sigmoid(z[i]) - y_[i]);
  }
  const Eigen::VectorXd scaled_w = penalty_scale_.cwiseProduct(w);
  const double value = loss / n + l2_ / (2.0 * n) * w.dot(scaled_w);
  if (gradient != nullptr) {
    gradient->resize(d + 1);
    gradient->head(d) = (x_.transpose() * residual) / n + (l2_ / n) * scaled_w;
    (*gradient)[d] = residual.sum() / n;
  }
  return value;
}

LogisticFit FitLogistic(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                        const BaseLearnerConfig& config,
                        const Eigen::VectorXd* sample_weights,
                        const Eigen::VectorXd* penalty_scale,
                        const Eigen::VectorXd* warm_start) {
  CheckConfig(config);
  if (!IsBinary(y)) throw DataError("logistic regression needs a binary target");
  const LogisticObjective objective(x, y, config.l2, sample_weights, penalty_scale);
  const Eigen::Index p = objective.num_params();

  Eigen::VectorXd theta = Eigen::VectorXd::Zero(p);
  if (warm_start != nullptr && warm_start->size() == p) theta = *warm_start;
  Eigen::VectorXd grad;
  double f = objective.ValueAndGradient(theta, &grad);

  constexpr double kArmijo = 1e-4;
  LogisticFit fit;
  double step = 1.0;
  Eigen::VectorXd prev_theta;
  Eigen::VectorXd prev_grad;
  Eigen::VectorXd trial_grad;
  int iter = 0;
  for (; iter < config.max_iters; ++iter) {
    if (grad.lpNorm<Eigen::Infinity>() < config.tol) {
      fit.converged = true;
      break;
    }
    if (iter > 0) {
      const Eigen::VectorXd s = theta - prev_theta;
      const double sy = s.dot(grad - prev_grad);
      if (sy > 0.0) step = s.squaredNorm() / sy;
    }
    const double g2 = grad.squaredNorm();
    bool accepted = false;
    for (int k = 0; k < 60; ++k) {
      Eigen::VectorXd trial = theta - step * grad;
      const double ft = objective.ValueAndGradient(trial, &trial_grad);
      if (std::isfinite(ft) && ft <= f - kArmijo * step * g2) {
        prev_theta = std::move(theta);
        prev_grad = std::move(grad);
        theta = std::move(trial);
        grad = trial_grad;
        f = ft;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no descent at machine precision
  }
  if (!fit.converged && grad.lpNorm<Eigen::Infinity>() < config.tol) fit.converged = true;

  fit.iterations = iter;
  fit.objective = f;
  fit.model.kind = BaseKind::kLogistic;
  fit.model.weights = theta.head(p - 1);
  fit.model.intercept = theta[p - 1];
  return fit;
}

LinearModel FitBase(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                    const BaseLearnerConfig& config) {
  CheckConfig(config);
  if (config.kind == BaseKind::kRidge) return FitRidge(x, y, config.l2);
  return FitLogistic(x, y, config).model;
}

double LogLoss(const Eigen::VectorXd& y, const Eigen::VectorXd& p) {
  if (y.size() != p.size() || y.size() == 0) {
    throw DataError("LogLoss: length mismatch or empty input");
  }
  constexpr double kEps = 1e-15;
  double total = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double q = std::clamp(p[i], kEps, 1.0 - kEps);
    total -= y[i] * std::log(q) + (1.0 - y[i]) * std::log1p(-q);
  }
  return total / static_cast<double>(y.size());
}

bool IsBinary(const Eigen::VectorXd& y) {
  return (y.array() == 0.0 || y.array() == 1.0).all();
}

std::string_view BaseKindName(BaseKind kind) {
  return kind == BaseKind::kRidge ? "ridge" : "logistic";
}

BaseKind ParseBaseKind(std::string_view name) {
  if (name == "ridge" || name == "Ridge") return BaseKind::kRidge;
  if (name == "logistic" || name == "Logistic") return BaseKind::kLogistic;
  throw ConfigError("unknown base learner '" + std::string(name) + "'");
}

}  // namespace upliftbench
