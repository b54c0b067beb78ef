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

#ifndef UPLIFTBENCH_ENCODING_H_
#define UPLIFTBENCH_ENCODING_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "upliftbench/dataset.h"

namespace upliftbench {

struct EncodingParams {
  int n_projections = 5;
  int buckets_per_projection = 6;
  std::uint64_t seed = 0;
};

struct ColumnSpec {
  enum class Kind { kContinuous, kBucket };
  Kind kind = Kind::kContinuous;
  // Continuous feature index, or projection index for bucket columns.
  int source = 0;
  // Bucket index within the projection; unused for continuous columns.
  int bucket = 0;

  std::string Name() const;
};

// Dense design matrix: standardized continuous features followed by one
// one-hot block per categorical projection.
class EncodedMatrix {
 public:
  EncodedMatrix() = default;
  EncodedMatrix(Eigen::MatrixXd values, std::vector<ColumnSpec> columns);

  Eigen::Index rows() const { return values_.rows(); }
  Eigen::Index dims() const { return values_.cols(); }
  const Eigen::MatrixXd& values() const { return values_; }
  const std::vector<ColumnSpec>& columns() const { return columns_; }

  EncodedMatrix Rows(std::span<const std::size_t> rows) const;

 private:
  Eigen::MatrixXd values_;
  std::vector<ColumnSpec> columns_;
};

// Bucket of the salted hash of all categorical codes for one projection.
int ProjectionBucket(const std::array<std::int64_t, kNumCategorical>& codes,
                     std::uint64_t seed, int projection, int buckets);

// Stores standardization statistics of the population it was fitted on so
// that held-out data is encoded with the training statistics.
class Encoder {
 public:
  static Encoder Fit(const Dataset& dataset, const EncodingParams& params);

  EncodedMatrix Transform(const Dataset& dataset) const;

  const EncodingParams& params() const { return params_; }
  const std::array<double, kNumContinuous>& means() const { return means_; }
  // Standard deviations; 0 marks a degenerate column encoded as zeros.
  const std::array<double, kNumContinuous>& scales() const { return scales_; }
  Eigen::Index dims() const {
    return kNumContinuous +
           static_cast<Eigen::Index>(params_.n_projections) *
               params_.buckets_per_projection;
  }

 private:
  EncodingParams params_;
  std::array<double, kNumContinuous> means_{};
  std::array<double, kNumContinuous> scales_{};
};

// Fit and transform on the same population.
EncodedMatrix Encode(const Dataset& dataset, const EncodingParams& params);

}  // namespace upliftbench

#endif  // UPLIFTBENCH_ENCODING_H_
