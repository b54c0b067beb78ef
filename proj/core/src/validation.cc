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

#include "upliftbench/validation.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "upliftbench/errors.h"
#include "upliftbench/linear_models.h"
#include "upliftbench/parallel.h"
#include "upliftbench/random.h"
#include "upliftbench/splitting.h"
#include "upliftbench/stats.h"

namespace upliftbench {
namespace {

using Index = std::vector<Eigen::Index>;

std::span<const double> AsSpan(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

void CheckBothClasses(const Eigen::VectorXd& y, std::string_view what) {
  if (!IsBinary(y)) throw DataError(std::string(what) + " must be 0/1");
  const double s = y.sum();
  if (s == 0.0 || s == static_cast<double>(y.size())) {
    throw DataError(std::string(what) + " has a single class");
  }
}

BaseLearnerConfig Classifier(double c, int max_iters, double tol) {
  if (!(c > 0.0)) throw ConfigError("C must be > 0");
  BaseLearnerConfig config;
  config.kind = BaseKind::kLogistic;
  config.l2 = 1.0 / c;
  config.max_iters = max_iters;
  config.tol = tol;
  return config;
}

// Smallest held-out log-loss over the C grid.
double BestHeldOutLoss(const Eigen::MatrixXd& x_train, const Eigen::VectorXd& y_train,
                       const Eigen::MatrixXd& x_test, const Eigen::VectorXd& y_test,
                       const C2stOptions& options) {
  double best = std::numeric_limits<double>::infinity();
  for (double c : options.c_grid) {
    const LinearModel m =
        FitLogistic(x_train, y_train, Classifier(c, options.max_iters, options.tol)).model;
    best = std::min(best, LogLoss(y_test, m.Predict(x_test)));
  }
  return best;
}

Eigen::VectorXd Permuted(const Eigen::VectorXd& v, Rng& rng) {
  Eigen::VectorXd out = v;
  std::shuffle(out.data(), out.data() + out.size(), rng);
  return out;
}

}  // namespace

double C2stResult::median_null_loss() const {
  if (null_losses.empty()) return std::nan("");
  return stats::Median(null_losses);
}

C2stResult C2st(const Eigen::MatrixXd& x, const Eigen::VectorXd& t, int n_permutations,
                std::uint64_t seed, const C2stOptions& options) {
  if (x.rows() != t.size()) throw DataError("C2ST: x and t differ in length");
  CheckBothClasses(t, "treatment");
  if (n_permutations < 19) throw ConfigError("C2ST needs at least 19 permutations");
  if (options.c_grid.empty()) throw ConfigError("C2ST: empty C grid");

  const IndexSplit split =
      StratifiedSplitIndices(StrataLabels(AsSpan(t)), 0.5, DeriveSeed(seed, 0));
  const Index train(split.train.begin(), split.train.end());
  const Index test(split.test.begin(), split.test.end());
  const Eigen::MatrixXd x_train = x(train, Eigen::all);
  const Eigen::MatrixXd x_test = x(test, Eigen::all);
  const Eigen::VectorXd t_train = t(train);
  const Eigen::VectorXd t_test = t(test);

  C2stResult result;
  result.n_permutations = n_permutations;
  result.model_loss = BestHeldOutLoss(x_train, t_train, x_test, t_test, options);
  result.null_losses.resize(static_cast<std::size_t>(n_permutations));
  ParallelFor(result.null_losses.size(), options.workers, [&](std::size_t r) {
    Rng rng = MakeRng(DeriveSeed(seed, 1), r);
    const Eigen::VectorXd yp_train = Permuted(t_train, rng);
    const Eigen::VectorXd yp_test = Permuted(t_test, rng);
    result.null_losses[r] = BestHeldOutLoss(x_train, yp_train, x_test, yp_test, options);
  });
  const auto at_most = std::count_if(result.null_losses.begin(), result.null_losses.end(),
                                     [&](double v) { return v <= result.model_loss; });
  result.p_value = static_cast<double>(1 + at_most) / static_cast<double>(1 + n_permutations);
  return result;
}

double RelativeImprovement(double dummy_loss, double model_loss) {
  if (!(dummy_loss > 0.0)) throw DataError("dummy log-loss must be positive");
  return 100.0 * (dummy_loss - model_loss) / dummy_loss;
}

DummyImprovementResult DummyImprovement(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                        std::uint64_t seed,
                                        const DummyImprovementOptions& options) {
  if (x.rows() != y.size()) throw DataError("x and y differ in length");
  CheckBothClasses(y, "outcome");
  if (options.c_grid.empty()) throw ConfigError("empty C grid");

  const IndexSplit split = StratifiedSplitIndices(
      StrataLabels(std::span<const double>(y.data(), static_cast<std::size_t>(y.size()))),
      1.0 - options.test_fraction, DeriveSeed(seed, 0));
  const Index train(split.train.begin(), split.train.end());
  const Index test(split.test.begin(), split.test.end());
  const Eigen::MatrixXd x_train = x(train, Eigen::all);
  const Eigen::VectorXd y_train = y(train);
  const Eigen::MatrixXd x_test = x(test, Eigen::all);
  const Eigen::VectorXd y_test = y(test);

  DummyImprovementResult result;
  result.chosen_c = options.c_grid.front();
  if (options.c_grid.size() > 1) {
    const auto folds =
        StratifiedKFoldIndices(StrataLabels(AsSpan(y_train)), options.inner_folds,
                               DeriveSeed(seed, 1));
    double best = std::numeric_limits<double>::infinity();
    for (double c : options.c_grid) {
      double total = 0.0;
      for (const IndexSplit& fold : folds) {
        const Index tr(fold.train.begin(), fold.train.end());
        const Index va(fold.test.begin(), fold.test.end());
        const LinearModel m =
            FitLogistic(x_train(tr, Eigen::all), y_train(tr),
                        Classifier(c, options.max_iters, options.tol))
                .model;
        total += LogLoss(y_train(va), m.Predict(x_train(va, Eigen::all)));
      }
      // Ties go to the smaller C, i.e. the larger penalty.
      const double mean = total / static_cast<double>(folds.size());
      if (mean < best || (mean == best && c < result.chosen_c)) {
        best = mean;
        result.chosen_c = c;
      }
    }
  }
  const LinearModel model =
      FitLogistic(x_train, y_train, Classifier(result.chosen_c, options.max_iters, options.tol))
          .model;
  result.model_loss = LogLoss(y_test, model.Predict(x_test));
  result.dummy_loss =
      LogLoss(y_test, Eigen::VectorXd::Constant(y_test.size(), y_train.mean()));
  result.improvement_percent = RelativeImprovement(result.dummy_loss, result.model_loss);
  return result;
}

nlohmann::json ToJson(const C2stResult& result) {
  return {{"model_loss", result.model_loss},
          {"median_null_loss", result.median_null_loss()},
          {"p_value", result.p_value},
          {"n_permutations", result.n_permutations},
          {"null_losses", result.null_losses}};
}

nlohmann::json ToJson(const DummyImprovementResult& result) {
  return {{"improvement_percent", result.improvement_percent},
          {"dummy_loss", result.dummy_loss},
          {"model_loss", result.model_loss},
          {"chosen_c", result.chosen_c}};
}

}  // namespace upliftbench
