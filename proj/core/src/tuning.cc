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

#include "upliftbench/tuning.h"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <string>

#include "upliftbench/errors.h"
#include "upliftbench/metrics.h"
#include "upliftbench/parallel.h"
#include "upliftbench/splitting.h"

namespace upliftbench {
namespace {

std::string Format(const char* name, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s=%g", name, value);
  return buf;
}

std::span<const double> AsSpan(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

double FoldScore(UpliftMethod method, const MetaLearnerConfig& config,
                 const LearningTask& train, const LearningTask& valid,
                 const TuneOptions& options) {
  const UpliftScorer scorer = FitUplift(method, train.x, train.y, train.t, config);
  const Eigen::VectorXd scores = scorer.Score(valid.x);
  if (options.objective == TuningObjective::kPehe) {
    return Pehe(AsSpan(*valid.tau), AsSpan(scores));
  }
  const auto treated = static_cast<int>((valid.t.array() == 1.0).count());
  const int control = static_cast<int>(valid.t.size()) - treated;
  const int resolution = std::min({options.auuc_resolution, treated, control});
  return Auuc(AsSpan(scores), AsSpan(valid.y), AsSpan(valid.t), std::max(resolution, 1));
}

}  // namespace

LearningTask LearningTask::Rows(std::span<const std::size_t> rows) const {
  const std::vector<Eigen::Index> idx(rows.begin(), rows.end());
  LearningTask out;
  out.x = x(idx, Eigen::all);
  out.y = y(idx);
  out.t = t(idx);
  if (tau) out.tau = Eigen::VectorXd((*tau)(idx));
  return out;
}

TuneResult Tune(UpliftMethod method, const std::vector<GridPoint>& grid,
                const LearningTask& task, const TuneOptions& options) {
  if (grid.empty()) throw ConfigError("tuning grid is empty");
  if (options.objective == TuningObjective::kPehe &&
      (!task.tau || task.tau->size() != task.size())) {
    throw ConfigError("PEHE tuning needs ground-truth effects");
  }
  TuneResult result;
  if (grid.size() == 1) {
    result.best = grid[0].config;
    result.table.push_back({grid[0].label, grid[0].penalty, {}, 0.0, true, {}});
    return result;
  }

  const bool binary = IsBinary(task.y);
  const std::vector<int> strata =
      binary ? StrataLabels(AsSpan(task.t), AsSpan(task.y)) : StrataLabels(AsSpan(task.t));
  const std::vector<IndexSplit> folds =
      StratifiedKFoldIndices(strata, options.folds, options.seed);
  std::vector<LearningTask> train(folds.size());
  std::vector<LearningTask> valid(folds.size());
  for (std::size_t f = 0; f < folds.size(); ++f) {
    train[f] = task.Rows(folds[f].train);
    valid[f] = task.Rows(folds[f].test);
  }

  const std::size_t k = folds.size();
  std::vector<double> scores(grid.size() * k, 0.0);
  std::vector<std::string> errors(grid.size() * k);
  ParallelFor(scores.size(), options.workers, [&](std::size_t cell) {
    const std::size_t g = cell / k;
    const std::size_t f = cell % k;
    try {
      scores[cell] = FoldScore(method, grid[g].config, train[f], valid[f], options);
      if (!std::isfinite(scores[cell])) errors[cell] = "non-finite fold score";
    } catch (const std::exception& e) {
      errors[cell] = e.what();
    }
  });

  const bool maximize = options.objective == TuningObjective::kAuuc;
  std::optional<std::size_t> best;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    CvRow row;
    row.label = grid[g].label;
    row.penalty = grid[g].penalty;
    double total = 0.0;
    for (std::size_t f = 0; f < k; ++f) {
      const std::size_t cell = g * k + f;
      row.fold_scores.push_back(scores[cell]);
      total += scores[cell];
      if (!errors[cell].empty() && row.valid) {
        row.valid = false;
        row.error = "fold " + std::to_string(f) + ": " + errors[cell];
      }
    }
    row.mean = total / static_cast<double>(k);
    if (row.valid) {
      if (!best) {
        best = g;
      } else {
        const CvRow& incumbent = result.table[*best];
        const bool better = maximize ? row.mean > incumbent.mean : row.mean < incumbent.mean;
        const bool tie_won = row.mean == incumbent.mean && row.penalty > incumbent.penalty;
        if (better || tie_won) best = g;
      }
    }
    result.table.push_back(std::move(row));
  }
  if (!best) {
    throw FitError("every grid point failed; first error: " + result.table[0].error);
  }
  result.best_index = *best;
  result.best = grid[*best].config;
  return result;
}

std::vector<double> DefaultLogisticCGrid() { return {1e0, 1e2, 1e4, 1e6, 1e8}; }

std::vector<double> DefaultRidgeAlphaGrid() { return {1e-8, 1e-6, 1e-4, 1e-2, 1e0}; }

std::vector<double> DefaultSdrCGrid() { return {1, 10, 100, 1000}; }

std::vector<double> DefaultSdrLambdaGrid() { return {0.1, 1}; }

std::vector<double> DefaultIteRidgeGrid() { return {1e-2, 1e0, 1e2, 1e4, 1e6}; }

std::vector<GridPoint> DefaultUpliftGrid(UpliftMethod method,
                                         const MetaLearnerConfig& base) {
  std::vector<GridPoint> grid;
  switch (method) {
    case UpliftMethod::kTwoModel:
    case UpliftMethod::kCvt:
      for (double c : DefaultLogisticCGrid()) {
        GridPoint p{base, Format("C", c), 1.0 / c};
        p.config.outcome.kind = BaseKind::kLogistic;
        p.config.outcome.l2 = 1.0 / c;
        grid.push_back(std::move(p));
      }
      break;
    case UpliftMethod::kMom:
      for (double alpha : DefaultRidgeAlphaGrid()) {
        GridPoint p{base, Format("alpha", alpha), alpha};
        p.config.effect.kind = BaseKind::kRidge;
        p.config.effect.l2 = alpha;
        grid.push_back(std::move(p));
      }
      break;
    case UpliftMethod::kSdr:
      for (double c : DefaultSdrCGrid()) {
        for (double lambda : DefaultSdrLambdaGrid()) {
          GridPoint p{base, Format("C", c) + "," + Format("lambda", lambda), 1.0 / c};
          p.config.outcome.kind = BaseKind::kLogistic;
          p.config.outcome.l2 = 1.0 / c;
          p.config.sdr_lambda = lambda;
          grid.push_back(std::move(p));
        }
      }
      break;
    default:
      return DefaultIteGrid(method, base);
  }
  return grid;
}

std::vector<GridPoint> DefaultIteGrid(UpliftMethod method, const MetaLearnerConfig& base,
                                      const std::vector<double>& l2_grid) {
  std::vector<GridPoint> grid;
  switch (method) {
    case UpliftMethod::kTLearner:
      for (double l2 : l2_grid) {
        GridPoint p{base, Format("alpha", l2), l2};
        p.config.outcome.kind = BaseKind::kRidge;
        p.config.outcome.l2 = l2;
        grid.push_back(std::move(p));
      }
      break;
    case UpliftMethod::kXLearner:
    case UpliftMethod::kRLearner:
    case UpliftMethod::kDrLearner:
      for (double l2 : l2_grid) {
        GridPoint p{base, Format("alpha", l2), l2};
        p.config.outcome.kind = BaseKind::kRidge;
        p.config.effect.kind = BaseKind::kRidge;
        p.config.effect.l2 = l2;
        grid.push_back(std::move(p));
      }
      break;
    default:
      return DefaultUpliftGrid(method, base);
  }
  return grid;
}

}  // namespace upliftbench
