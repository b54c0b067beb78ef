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

#include "upliftbench/stats.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>

#include "upliftbench/errors.h"

namespace upliftbench::stats {

double Mean(std::span<const double> x) {
  if (x.empty()) return 0.0;
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double Variance(std::span<const double> x) {
  if (x.empty()) return 0.0;
  const double mean = Mean(x);
  double sum = 0.0;
  for (double v : x) sum += (v - mean) * (v - mean);
  return sum / static_cast<double>(x.size());
}

double StdDev(std::span<const double> x) { return std::sqrt(Variance(x)); }

double SampleStdDev(std::span<const double> x) {
  if (x.size() < 2) return 0.0;
  const double n = static_cast<double>(x.size());
  return std::sqrt(Variance(x) * n / (n - 1.0));
}

double PearsonCorrelation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw DataError("PearsonCorrelation: length mismatch");
  }
  const double mx = Mean(x);
  const double my = Mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

double Quantile(std::vector<double> values, double q) {
  if (values.empty()) throw DataError("Quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

double Median(std::vector<double> values) { return Quantile(std::move(values), 0.5); }

ChiSquareResult ChiSquareIndependence(std::span<const double> table,
                                      std::size_t rows, std::size_t cols) {
  if (table.size() != rows * cols) {
    throw DataError("ChiSquareIndependence: table size mismatch");
  }
  std::vector<double> row_sum(rows, 0.0), col_sum(cols, 0.0);
  double total = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      row_sum[r] += table[r * cols + c];
      col_sum[c] += table[r * cols + c];
      total += table[r * cols + c];
    }
  }
  const auto live_rows = std::count_if(row_sum.begin(), row_sum.end(),
                                       [](double v) { return v > 0; });
  const auto live_cols = std::count_if(col_sum.begin(), col_sum.end(),
                                       [](double v) { return v > 0; });
  ChiSquareResult result;
  result.degrees_of_freedom = static_cast<int>((live_rows - 1) * (live_cols - 1));
  if (result.degrees_of_freedom <= 0 || total <= 0.0) return result;
  for (std::size_t r = 0; r < rows; ++r) {
    if (row_sum[r] <= 0) continue;
    for (std::size_t c = 0; c < cols; ++c) {
      if (col_sum[c] <= 0) continue;
      const double expected = row_sum[r] * col_sum[c] / total;
      const double diff = table[r * cols + c] - expected;
      result.statistic += diff * diff / expected;
    }
  }
  const boost::math::chi_squared dist(result.degrees_of_freedom);
  result.p_value = boost::math::cdf(boost::math::complement(dist, result.statistic));
  return result;
}

}  // namespace upliftbench::stats
