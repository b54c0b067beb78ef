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

#include "upliftbench/encoding.h"

#include <cmath>
#include <string>

#include "upliftbench/errors.h"
#include "upliftbench/logging.h"
#include "upliftbench/random.h"

namespace upliftbench {

std::string ColumnSpec::Name() const {
  if (kind == Kind::kContinuous) return "c" + std::to_string(source);
  return "p" + std::to_string(source) + "_b" + std::to_string(bucket);
}

EncodedMatrix::EncodedMatrix(Eigen::MatrixXd values, std::vector<ColumnSpec> columns)
    : values_(std::move(values)), columns_(std::move(columns)) {
  if (static_cast<std::size_t>(values_.cols()) != columns_.size()) {
    throw DataError("EncodedMatrix: column spec does not match matrix width");
  }
}

EncodedMatrix EncodedMatrix::Rows(std::span<const std::size_t> rows) const {
  Eigen::MatrixXd subset(static_cast<Eigen::Index>(rows.size()), values_.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    subset.row(static_cast<Eigen::Index>(i)) =
        values_.row(static_cast<Eigen::Index>(rows[i]));
  }
  return EncodedMatrix(std::move(subset), columns_);
}

int ProjectionBucket(const std::array<std::int64_t, kNumCategorical>& codes,
                     std::uint64_t seed, int projection, int buckets) {
  std::uint64_t h = Mix64(seed ^ (0x9e3779b97f4a7c15ULL *
                                  (static_cast<std::uint64_t>(projection) + 1)));
  for (int j = 0; j < kNumCategorical; ++j) {
    // Position-dependent salt keeps (a, b) and (b, a) apart.
    h = Mix64(h ^ (static_cast<std::uint64_t>(codes[j]) +
                   0x632be59bd9b4e019ULL * static_cast<std::uint64_t>(j + 1)));
  }
  return static_cast<int>(h % static_cast<std::uint64_t>(buckets));
}

Encoder Encoder::Fit(const Dataset& dataset, const EncodingParams& params) {
  if (params.n_projections < 0) {
    throw ConfigError("encoding: n_projections must be >= 0");
  }
  if (params.buckets_per_projection < 2) {
    throw ConfigError("encoding: buckets_per_projection must be >= 2");
  }
  if (dataset.empty()) throw DataError("encoding: empty dataset");
  Encoder encoder;
  encoder.params_ = params;
  const double n = static_cast<double>(dataset.size());
  for (int j = 0; j < kNumContinuous; ++j) {
    double mean = 0.0;
    for (const Sample& s : dataset.samples()) mean += s.continuous[j];
    mean /= n;
    double var = 0.0;
    for (const Sample& s : dataset.samples()) {
      var += (s.continuous[j] - mean) * (s.continuous[j] - mean);
    }
    var /= n;
    encoder.means_[j] = mean;
    encoder.scales_[j] = var > 0.0 ? std::sqrt(var) : 0.0;
    if (encoder.scales_[j] == 0.0) {
      Warn("encoding: continuous feature " + std::to_string(j) +
           " has zero variance; encoded as zeros");
    }
  }
  return encoder;
}

EncodedMatrix Encoder::Transform(const Dataset& dataset) const {
  const auto n = static_cast<Eigen::Index>(dataset.size());
  const int buckets = params_.buckets_per_projection;
  Eigen::MatrixXd values = Eigen::MatrixXd::Zero(n, dims());
  std::vector<ColumnSpec> columns;
  columns.reserve(static_cast<std::size_t>(dims()));
  for (int j = 0; j < kNumContinuous; ++j) {
    columns.push_back({ColumnSpec::Kind::kContinuous, j, 0});
  }
  for (int p = 0; p < params_.n_projections; ++p) {
    for (int b = 0; b < buckets; ++b) {
      columns.push_back({ColumnSpec::Kind::kBucket, p, b});
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const Sample& s = dataset[static_cast<std::size_t>(i)];
    for (int j = 0; j < kNumContinuous; ++j) {
      if (scales_[j] > 0.0) {
        values(i, j) = (s.continuous[j] - means_[j]) / scales_[j];
      }
    }
    for (int p = 0; p < params_.n_projections; ++p) {
      const int bucket = ProjectionBucket(s.categorical, params_.seed, p, buckets);
      values(i, kNumContinuous + p * buckets + bucket) = 1.0;
    }
  }
  return EncodedMatrix(std::move(values), std::move(columns));
}

EncodedMatrix Encode(const Dataset& dataset, const EncodingParams& params) {
  return Encoder::Fit(dataset, params).Transform(dataset);
}

}  // namespace upliftbench
