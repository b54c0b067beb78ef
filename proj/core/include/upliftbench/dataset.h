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

#ifndef UPLIFTBENCH_DATASET_H_
#define UPLIFTBENCH_DATASET_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace upliftbench {

inline constexpr int kNumContinuous = 4;
inline constexpr int kNumCategorical = 8;

// One user of an incrementality test.
//
// Invariants (checked by ValidateConstraints, not enforced on construction so
// that corrupted corpora can still be loaded and inspected):
//   - treatment == 0 implies exposure == 0
//   - visit == 0 implies conversion == 0
struct Sample {
  std::array<double, kNumContinuous> continuous{};
  std::array<std::int64_t, kNumCategorical> categorical{};
  std::uint8_t treatment = 0;
  std::uint8_t exposure = 0;
  std::uint8_t visit = 0;
  std::uint8_t conversion = 0;
  // Index into Dataset::source_tags().
  std::uint32_t source = 0;
};

// Which column plays the role of the outcome Y.
enum class OutcomeKind { kVisit, kConversion, kContinuous };

// An immutable, ordered collection of samples.
//
// A dataset may carry a real-valued outcome column (semi-synthetic ITE data)
// and a list of source tags identifying the incrementality test each row came
// from.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::vector<Sample> samples,
                   std::vector<std::string> source_tags = {},
                   std::vector<double> outcome = {});

  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  const Sample& operator[](std::size_t i) const { return samples_[i]; }
  std::span<const Sample> samples() const { return samples_; }

  const std::vector<std::string>& source_tags() const { return source_tags_; }
  // The tag of a single-source dataset.
  std::optional<std::string> source_tag() const;

  bool has_continuous_outcome() const { return !outcome_.empty(); }
  std::span<const double> continuous_outcome() const { return outcome_; }

  // (#treatment = 1) / n; 0 for an empty dataset.
  double treatment_ratio() const;
  std::size_t num_treated() const { return num_treated_; }

  Eigen::VectorXd Treatments() const;
  Eigen::VectorXd Outcomes(OutcomeKind kind) const;

  // Rows in the given order.
  Dataset Subset(std::span<const std::size_t> rows) const;

 private:
  std::vector<Sample> samples_;
  std::vector<std::string> source_tags_;
  std::vector<double> outcome_;
  std::size_t num_treated_ = 0;
};

struct ConstraintReport {
  // Rows with treatment = 0 and exposure = 1.
  std::size_t exposed_controls = 0;
  // Rows with visit = 0 and conversion = 1.
  std::size_t conversions_without_visit = 0;

  std::size_t total() const {
    return exposed_controls + conversions_without_visit;
  }
};

ConstraintReport ValidateConstraints(const Dataset& dataset);

std::string_view OutcomeKindName(OutcomeKind kind);
OutcomeKind ParseOutcomeKind(std::string_view name);

}  // namespace upliftbench

#endif  // UPLIFTBENCH_DATASET_H_
