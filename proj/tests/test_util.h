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

#ifndef UPLIFTBENCH_TESTS_TEST_UTIL_H_
#define UPLIFTBENCH_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "upliftbench/dataset.h"

namespace upliftbench::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("upliftbench_test_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

inline Sample MakeSample(std::uint8_t t, std::uint8_t v = 0, std::uint8_t c = 0,
                         std::uint8_t e = 0) {
  Sample s;
  s.treatment = t;
  s.visit = v;
  s.conversion = c;
  s.exposure = e;
  return s;
}

// n rows, the first round(n * ratio) treated, features filled from a seeded
// generator and labels consistent with the dataset constraints.
inline Dataset RandomDataset(std::size_t n, double ratio, std::uint64_t seed,
                             std::uint32_t source = 0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<int> code(0, 9);
  std::bernoulli_distribution visit(0.3), conv(0.2), expo(0.5);
  const auto treated = static_cast<std::size_t>(std::llround(n * ratio));
  std::vector<Sample> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    Sample& s = rows[i];
    for (double& v : s.continuous) v = normal(rng);
    for (auto& c : s.categorical) c = code(rng);
    s.treatment = i < treated;
    s.visit = visit(rng);
    s.conversion = s.visit && conv(rng);
    s.exposure = s.treatment && expo(rng);
    s.source = source;
  }
  return Dataset(std::move(rows));
}

// Direct-definition uplift curve: for every grid point, rank each arm by
// descending score (ties by index) and average the top ceil(k n / K) rows.
// Quadratic in n; meant as an oracle only.
inline std::vector<double> BruteForceCurve(const std::vector<double>& s,
                                           const std::vector<double>& y,
                                           const std::vector<double>& t, int k_max) {
  std::vector<double> values;
  for (int k = 1; k <= k_max; ++k) {
    double arm_mean[2] = {0, 0};
    for (int arm = 0; arm < 2; ++arm) {
      std::vector<std::size_t> rows;
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (static_cast<int>(t[i]) == arm) rows.push_back(i);
      }
      const std::size_t n = rows.size();
      const std::size_t top = (k * n + k_max - 1) / k_max;
      double sum = 0;
      std::size_t taken = 0;
      // Selection by counting how many rows outrank each row.
      for (std::size_t i : rows) {
        std::size_t rank = 0;
        for (std::size_t j : rows) {
          if (s[j] > s[i] || (s[j] == s[i] && j < i)) ++rank;
        }
        if (rank < top) {
          sum += y[i];
          ++taken;
        }
      }
      arm_mean[arm] = sum / static_cast<double>(taken);
    }
    values.push_back(arm_mean[1] - arm_mean[0]);
  }
  return values;
}

inline double BruteForceAuuc(const std::vector<double>& s, const std::vector<double>& y,
                             const std::vector<double>& t, int k_max) {
  const auto curve = BruteForceCurve(s, y, t, k_max);
  double sum = 0;
  for (double v : curve) sum += v;
  return sum / k_max;
}

}  // namespace upliftbench::testing

#endif  // UPLIFTBENCH_TESTS_TEST_UTIL_H_
