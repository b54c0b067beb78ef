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

#include "upliftbench/splitting.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "upliftbench/errors.h"
#include "upliftbench/random.h"

namespace upliftbench {
namespace {

// Labels: 0/1 for treatment-only strata, 2 + 2t + y for treatment x outcome.
std::string DescribeStratum(int label) {
  switch (label) {
    case 0:
      return "T=0";
    case 1:
      return "T=1";
    case 2:
      return "T=0,Y=0";
    case 3:
      return "T=0,Y=1";
    case 4:
      return "T=1,Y=0";
    case 5:
      return "T=1,Y=1";
    default:
      return "stratum " + std::to_string(label);
  }
}

std::map<int, std::vector<std::size_t>> GroupByStratum(std::span<const int> strata) {
  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < strata.size(); ++i) groups[strata[i]].push_back(i);
  return groups;
}

int CheckedFlag(double v, const char* what) {
  if (v != 0.0 && v != 1.0) {
    throw DataError(std::string("stratification requires a binary ") + what);
  }
  return static_cast<int>(v);
}

}  // namespace

std::vector<int> StrataLabels(std::span<const double> treatment,
                              std::span<const double> binary_outcome) {
  if (!binary_outcome.empty() && binary_outcome.size() != treatment.size()) {
    throw DataError("StrataLabels: length mismatch");
  }
  std::vector<int> labels(treatment.size());
  for (std::size_t i = 0; i < treatment.size(); ++i) {
    const int t = CheckedFlag(treatment[i], "treatment");
    labels[i] = binary_outcome.empty()
                    ? t
                    : 2 + 2 * t + CheckedFlag(binary_outcome[i], "outcome");
  }
  return labels;
}

std::vector<int> StrataLabels(const Dataset& dataset, Stratification stratify_on,
                              OutcomeKind outcome) {
  const Eigen::VectorXd t = dataset.Treatments();
  if (stratify_on == Stratification::kTreatment) {
    return StrataLabels(std::span<const double>(t.data(), t.size()));
  }
  const Eigen::VectorXd y = dataset.Outcomes(outcome);
  return StrataLabels(std::span<const double>(t.data(), t.size()),
                      std::span<const double>(y.data(), y.size()));
}

IndexSplit StratifiedSplitIndices(std::span<const int> strata, double train_fraction,
                                  std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ConfigError("train_fraction must lie strictly between 0 and 1");
  }
  auto groups = GroupByStratum(strata);
  std::vector<std::size_t> quota;
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (const auto& [label, rows] : groups) {
    if (rows.size() < 2) {
      throw DataError("stratum " + DescribeStratum(label) + " has " +
                      std::to_string(rows.size()) + " row(s); at least 2 needed");
    }
    const double exact = static_cast<double>(rows.size()) * train_fraction;
    const auto base = static_cast<std::size_t>(std::floor(exact));
    remainders.emplace_back(exact - static_cast<double>(base), quota.size());
    quota.push_back(base);
    assigned += base;
  }
  const auto target = static_cast<std::size_t>(
      std::llround(static_cast<double>(strata.size()) * train_fraction));
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t r = 0; assigned < target && r < remainders.size(); ++r) {
    ++quota[remainders[r].second];
    ++assigned;
  }

  Rng rng = MakeRng(seed, 0);
  IndexSplit split;
  std::size_t g = 0;
  for (auto& [label, rows] : groups) {
    std::shuffle(rows.begin(), rows.end(), rng);
    const std::size_t k = quota[g++];
    split.train.insert(split.train.end(), rows.begin(), rows.begin() + k);
    split.test.insert(split.test.end(), rows.begin() + k, rows.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

std::vector<IndexSplit> StratifiedKFoldIndices(std::span<const int> strata, int k,
                                               std::uint64_t seed) {
  if (k < 2) throw ConfigError("k-fold requires k >= 2");
  auto groups = GroupByStratum(strata);
  Rng rng = MakeRng(seed, 1);
  std::vector<std::vector<std::size_t>> folds(static_cast<std::size_t>(k));
  std::size_t position = 0;
  for (auto& [label, rows] : groups) {
    if (rows.size() < static_cast<std::size_t>(k)) {
      throw DataError("stratum " + DescribeStratum(label) + " has " +
                      std::to_string(rows.size()) + " row(s); " + std::to_string(k) +
                      "-fold cross-validation needs at least " + std::to_string(k));
    }
    std::shuffle(rows.begin(), rows.end(), rng);
    for (std::size_t r : rows) folds[position++ % folds.size()].push_back(r);
  }
  std::vector<IndexSplit> result(folds.size());
  for (std::size_t f = 0; f < folds.size(); ++f) {
    std::sort(folds[f].begin(), folds[f].end());
    result[f].test = folds[f];
    for (std::size_t g = 0; g < folds.size(); ++g) {
      if (g != f) {
        result[f].train.insert(result[f].train.end(), folds[g].begin(),
                               folds[g].end());
      }
    }
    std::sort(result[f].train.begin(), result[f].train.end());
  }
  return result;
}

std::pair<Dataset, Dataset> Split(const Dataset& dataset, const SplitSpec& spec) {
  const std::vector<int> strata =
      StrataLabels(dataset, spec.stratify_on, spec.outcome);
  const IndexSplit split =
      StratifiedSplitIndices(strata, spec.train_fraction, spec.seed);
  return {dataset.Subset(split.train), dataset.Subset(split.test)};
}

std::vector<std::pair<Dataset, Dataset>> KFold(const Dataset& dataset, int k,
                                               Stratification stratify_on,
                                               OutcomeKind outcome,
                                               std::uint64_t seed) {
  const std::vector<int> strata = StrataLabels(dataset, stratify_on, outcome);
  std::vector<std::pair<Dataset, Dataset>> result;
  for (const IndexSplit& fold : StratifiedKFoldIndices(strata, k, seed)) {
    result.emplace_back(dataset.Subset(fold.train), dataset.Subset(fold.test));
  }
  return result;
}

ArmCounts RebalancedCounts(ArmCounts available, double target_ratio) {
  if (!(target_ratio > 0.0 && target_ratio < 1.0)) {
    throw ConfigError("target ratio must lie strictly between 0 and 1");
  }
  const double n_t = static_cast<double>(available.treated);
  const double n_c = static_cast<double>(available.control);
  // The small slack keeps exact ratios such as 850/150 at 0.85 from losing a
  // row to floating-point rounding.
  constexpr double kSlack = 1e-9;
  ArmCounts kept = available;
  if (n_t / (n_t + n_c) > target_ratio) {
    kept.treated = std::min(
        available.treated,
        static_cast<std::size_t>(std::floor(n_c * target_ratio / (1.0 - target_ratio) + kSlack)));
  } else {
    kept.control = std::min(
        available.control,
        static_cast<std::size_t>(std::floor(n_t * (1.0 - target_ratio) / target_ratio + kSlack)));
  }
  return kept;
}

Dataset Rebalance(std::span<const Dataset> tests, double target_ratio,
                  std::uint64_t seed) {
  if (tests.empty()) throw DataError("rebalance: no incrementality tests given");
  std::vector<std::string> tags;
  std::set<std::string> seen;
  bool with_outcome = true;
  for (std::size_t i = 0; i < tests.size(); ++i) {
    const auto tag = tests[i].source_tag();
    if (!tag) {
      throw DataError("rebalance: test " + std::to_string(i) +
                      " must carry exactly one source tag");
    }
    if (!seen.insert(*tag).second) {
      throw DataError("rebalance: duplicate source tag '" + *tag + "'");
    }
    tags.push_back(*tag);
    with_outcome = with_outcome && tests[i].has_continuous_outcome();
  }

  std::vector<Sample> samples;
  std::vector<double> outcome;
  for (std::size_t i = 0; i < tests.size(); ++i) {
    const Dataset& test = tests[i];
    std::vector<std::size_t> treated, control;
    for (std::size_t r = 0; r < test.size(); ++r) {
      (test[r].treatment ? treated : control).push_back(r);
    }
    if (treated.empty() || control.empty()) {
      throw DataError("rebalance: test '" + tags[i] + "' has an empty " +
                      (treated.empty() ? "treated" : "control") +
                      " arm; target ratio unreachable");
    }
    const ArmCounts kept =
        RebalancedCounts({treated.size(), control.size()}, target_ratio);
    Rng rng = MakeRng(seed, i);
    std::shuffle(treated.begin(), treated.end(), rng);
    std::shuffle(control.begin(), control.end(), rng);
    treated.resize(kept.treated);
    control.resize(kept.control);
    std::vector<std::size_t> rows = treated;
    rows.insert(rows.end(), control.begin(), control.end());
    std::sort(rows.begin(), rows.end());
    for (std::size_t r : rows) {
      Sample s = test[r];
      s.source = static_cast<std::uint32_t>(i);
      samples.push_back(s);
      if (with_outcome) outcome.push_back(test.continuous_outcome()[r]);
    }
  }

  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng = MakeRng(seed, tests.size());
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<Sample> shuffled;
  std::vector<double> shuffled_outcome;
  shuffled.reserve(samples.size());
  for (std::size_t r : order) {
    shuffled.push_back(samples[r]);
    if (with_outcome) shuffled_outcome.push_back(outcome[r]);
  }
  return Dataset(std::move(shuffled), std::move(tags), std::move(shuffled_outcome));
}

}  // namespace upliftbench
