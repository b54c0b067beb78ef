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

#ifndef UPLIFTBENCH_METRICS_H_
#define UPLIFTBENCH_METRICS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace upliftbench {

// "Separate, relative" uplift curve on the grid rho_k = k / K, k = 1..K:
//   curve(rho) = mean(y over the top ceil(rho n_t) treated rows)
//              - mean(y over the top ceil(rho n_c) control rows)
// with each arm ranked by descending score, ties by original index, and
// ceil(k n / K) computed in integer arithmetic.
struct UpliftCurve {
  std::vector<double> grid;
  std::vector<double> values;

  int resolution() const { return static_cast<int>(grid.size()); }
};

UpliftCurve ComputeUpliftCurve(std::span<const double> scores,
                               std::span<const double> y,
                               std::span<const double> t, int resolution);

// Rectangle rule: (1/K) sum_k curve(rho_k).
double Auuc(const UpliftCurve& curve);

// Shorthand for Auuc(ComputeUpliftCurve(...)).
double Auuc(std::span<const double> scores, std::span<const double> y,
            std::span<const double> t, int resolution);

struct MetricResult {
  double value = 0.0;
  std::optional<double> ci_low;
  std::optional<double> ci_high;
  int n_bootstrap = 0;
  std::uint64_t seed = 0;
  // Bootstrap replicates thrown away because an arm was empty.
  int redraws = 0;

  double ci_width() const {
    return ci_low && ci_high ? *ci_high - *ci_low : 0.0;
  }
};

struct BootstrapOptions {
  // Resample treated and control rows separately (arm sizes are preserved).
  bool stratified = true;
  double confidence = 0.95;
  int workers = 1;
};

// Percentile bootstrap CI around the empirical AUUC. Replicate r draws from
// its own RNG stream, so the result does not depend on the worker count.
// Unstratified replicates with an arm smaller than the resolution are
// redrawn; redrawing more than half of n_bootstrap replicates is an error.
MetricResult AuucWithCi(std::span<const double> scores, std::span<const double> y,
                        std::span<const double> t, int resolution,
                        int n_bootstrap, std::uint64_t seed,
                        const BootstrapOptions& options = {});

// Square root of the precision in estimation of heterogeneous effects.
double Pehe(std::span<const double> tau_true, std::span<const double> tau_pred);

// Risk of the policy "treat when score > threshold", estimated on RCT data:
//   1 - [mean(y | pi=1, T=1) P(pi=1) + mean(y | pi=0, T=0) P(pi=0)].
// Empty conditional cells contribute 0 and emit a warning.
double PolicyRisk(std::span<const double> scores, std::span<const double> y,
                  std::span<const double> t, double threshold = 0.0);

enum class AteMode { kDiffMeans, kIpw };

double Ate(std::span<const double> y, std::span<const double> t, AteMode mode,
           std::span<const double> propensity = {});

nlohmann::json ToJson(const MetricResult& result);

}  // namespace upliftbench

#endif  // UPLIFTBENCH_METRICS_H_
