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

#ifndef UPLIFTBENCH_SPLITTING_H_
#define UPLIFTBENCH_SPLITTING_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "upliftbench/dataset.h"

namespace upliftbench {

enum class Stratification { kTreatment, kTreatmentAndOutcome };

struct SplitSpec {
  double train_fraction = 0.8;
  Stratification stratify_on = Stratification::kTreatment;
  // Outcome used by kTreatmentAndOutcome; must be binary.
  OutcomeKind outcome = OutcomeKind::kVisit;
  std::uint64_t seed = 0;
};

struct IndexSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Stratum label per row: t for kTreatment, 2t + y for kTreatmentAndOutcome.
std::vector<int> StrataLabels(const Dataset& dataset, Stratification stratify_on,
                              OutcomeKind outcome = OutcomeKind::kVisit);
std::vector<int> StrataLabels(std::span<const double> treatment,
                              std::span<const double> binary_outcome = {});

// Per-stratum train counts are floor(size * fraction); the remaining
// round(n * fraction) - sum(floors) rows go to the strata with the largest
// fractional parts (ties to the lower label). Index lists are sorted.
IndexSplit StratifiedSplitIndices(std::span<const int> strata,
                                  double train_fraction, std::uint64_t seed);

// Rows of each stratum are shuffled and dealt round-robin to the folds with
// the deal position carried across strata, so fold sizes and per-stratum
// counts differ by at most one.
std::vector<IndexSplit> StratifiedKFoldIndices(std::span<const int> strata,
                                               int k, std::uint64_t seed);

std::pair<Dataset, Dataset> Split(const Dataset& dataset, const SplitSpec& spec);

std::vector<std::pair<Dataset, Dataset>> KFold(const Dataset& dataset, int k,
                                               Stratification stratify_on,
                                               OutcomeKind outcome,
                                               std::uint64_t seed);

// Sub-samples each incrementality test so that its treated fraction equals
// target_ratio within one row, then concatenates and shuffles. Inputs must
// carry distinct source tags; the output keeps one tag per input.
Dataset Rebalance(std::span<const Dataset> tests, double target_ratio,
                  std::uint64_t seed);

// Number of rows kept per arm by Rebalance for one test.
struct ArmCounts {
  std::size_t treated = 0;
  std::size_t control = 0;
};
ArmCounts RebalancedCounts(ArmCounts available, double target_ratio);

}  // namespace upliftbench

#endif  // UPLIFTBENCH_SPLITTING_H_
