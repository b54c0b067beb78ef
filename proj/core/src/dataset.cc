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

#include "upliftbench/dataset.h"

#include <string>

#include "upliftbench/errors.h"

namespace upliftbench {

Dataset::Dataset(std::vector<Sample> samples, std::vector<std::string> source_tags,
                 std::vector<double> outcome)
    : samples_(std::move(samples)),
      source_tags_(std::move(source_tags)),
      outcome_(std::move(outcome)) {
  if (!outcome_.empty() && outcome_.size() != samples_.size()) {
    throw DataError("Dataset: outcome column has " +
                    std::to_string(outcome_.size()) + " values for " +
                    std::to_string(samples_.size()) + " samples");
  }
  for (const Sample& s : samples_) {
    num_treated_ += s.treatment ? 1 : 0;
    if (!source_tags_.empty() && s.source >= source_tags_.size()) {
      throw DataError("Dataset: sample refers to unknown source " +
                      std::to_string(s.source));
    }
  }
}

std::optional<std::string> Dataset::source_tag() const {
  if (source_tags_.size() == 1) return source_tags_.front();
  return std::nullopt;
}

double Dataset::treatment_ratio() const {
  if (samples_.empty()) return 0.0;
  return static_cast<double>(num_treated_) / static_cast<double>(samples_.size());
}

Eigen::VectorXd Dataset::Treatments() const {
  Eigen::VectorXd t(static_cast<Eigen::Index>(size()));
  for (std::size_t i = 0; i < size(); ++i) t[i] = samples_[i].treatment;
  return t;
}

Eigen::VectorXd Dataset::Outcomes(OutcomeKind kind) const {
  Eigen::VectorXd y(static_cast<Eigen::Index>(size()));
  switch (kind) {
    case OutcomeKind::kVisit:
      for (std::size_t i = 0; i < size(); ++i) y[i] = samples_[i].visit;
      break;
    case OutcomeKind::kConversion:
      for (std::size_t i = 0; i < size(); ++i) y[i] = samples_[i].conversion;
      break;
    case OutcomeKind::kContinuous:
      if (!has_continuous_outcome()) {
        throw DataError("dataset has no continuous outcome column");
      }
      for (std::size_t i = 0; i < size(); ++i) y[i] = outcome_[i];
      break;
  }
  return y;
}

Dataset Dataset::Subset(std::span<const std::size_t> rows) const {
  std::vector<Sample> samples;
  samples.reserve(rows.size());
  std::vector<double> outcome;
  if (has_continuous_outcome()) outcome.reserve(rows.size());
  for (std::size_t r : rows) {
    samples.push_back(samples_.at(r));
    if (has_continuous_outcome()) outcome.push_back(outcome_[r]);
  }
  return Dataset(std::move(samples), source_tags_, std::move(outcome));
}

ConstraintReport ValidateConstraints(const Dataset& dataset) {
  ConstraintReport report;
  for (const Sample& s : dataset.samples()) {
    if (s.treatment == 0 && s.exposure != 0) ++report.exposed_controls;
    if (s.visit == 0 && s.conversion != 0) ++report.conversions_without_visit;
  }
  return report;
}

std::string_view OutcomeKindName(OutcomeKind kind) {
  switch (kind) {
    case OutcomeKind::kVisit:
      return "visit";
    case OutcomeKind::kConversion:
      return "conversion";
    case OutcomeKind::kContinuous:
      return "continuous";
  }
  return "unknown";
}

OutcomeKind ParseOutcomeKind(std::string_view name) {
  if (name == "visit") return OutcomeKind::kVisit;
  if (name == "conversion") return OutcomeKind::kConversion;
  if (name == "continuous" || name == "y") return OutcomeKind::kContinuous;
  throw ConfigError("unknown outcome '" + std::string(name) + "'");
}

}  // namespace upliftbench
