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

#ifndef UPLIFTBENCH_STATS_H_
#define UPLIFTBENCH_STATS_H_

#include <cstddef>
#include <span>
#include <vector>

namespace upliftbench::stats {

double Mean(std::span<const double> x);

// Population variance (divides by n).
double Variance(std::span<const double> x);

double StdDev(std::span<const double> x);

// Sample standard deviation (divides by n - 1); 0 for fewer than two values.
double SampleStdDev(std::span<const double> x);

// Pearson correlation; 0 when either input has zero variance.
double PearsonCorrelation(std::span<const double> x, std::span<const double> y);

// Linear-interpolation quantile (numpy "linear" rule) of unsorted data.
double Quantile(std::vector<double> values, double q);

double Median(std::vector<double> values);

struct ChiSquareResult {
  double statistic = 0.0;
  int degrees_of_freedom = 0;
  double p_value = 1.0;
};

// Pearson chi-square test of independence on an r x c contingency table given
// row-major. Rows or columns with a zero margin are dropped.
ChiSquareResult ChiSquareIndependence(std::span<const double> table,
                                      std::size_t rows, std::size_t cols);

}  // namespace upliftbench::stats

#endif  // UPLIFTBENCH_STATS_H_
