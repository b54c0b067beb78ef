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

#include "upliftbench/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "upliftbench/errors.h"
#include "upliftbench/logging.h"
#include "upliftbench/parallel.h"
#include "upliftbench/random.h"
#include "upliftbench/stats.h"

namespace upliftbench {
namespace {

void CheckLengths(std::span<const double> scores, std::span<const double> y,
                  std::span<const double> t) {
  if (scores.size() != y.size() || scores.size() != t.size()) {
    throw DataError("scores, y and t differ in length");
  }
}

// Row indices of one arm ordered by descending score, ties by index.
std::vector<std::size_t> RankedArm(std::span<const double> scores,
                                   std::span<const double> t, double arm) {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] == arm) rows.push_back(i);
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return rows;
}

// Number of rows in the top rho_k = k / K fraction of an arm of size n,
// computed in exact integer arithmetic.
std::size_t TopCount(std::size_t k, std::size_t n, std::size_t resolution) {
  return (k * n + resolution - 1) / resolution;
}

// Curve from each arm's outcomes listed in rank order.
UpliftCurve CurveFromRanked(std::span<const double> treated_y,
                            std::span<const double> control_y, int resolution) {
  const auto k_max = static_cast<std::size_t>(resolution);
  std::vector<double> pt(treated_y.size() + 1, 0.0);
  std::vector<double> pc(control_y.size() + 1, 0.0);
  std::partial_sum(treated_y.begin(), treated_y.end(), pt.begin() + 1);
  std::partial_sum(control_y.begin(), control_y.end(), pc.begin() + 1);
  UpliftCurve curve;
  curve.grid.resize(k_max);
  curve.values.resize(k_max);
  for (std::size_t k = 1; k <= k_max; ++k) {
    const std::size_t mt = TopCount(k, treated_y.size(), k_max);
    const std::size_t mc = TopCount(k, control_y.size(), k_max);
    curve.grid[k - 1] = static_cast<double>(k) / static_cast<double>(k_max);
    curve.values[k - 1] =
        pt[mt] / static_cast<double>(mt) - pc[mc] / static_cast<double>(mc);
  }
  curve.grid.back() = 1.0;
  return curve;
}

void CheckResolution(int resolution, std::size_t n_treated, std::size_t n_control) {
  if (n_treated == 0 || n_control == 0) throw DataError("uplift curve: empty arm");
  if (resolution < 1) throw ConfigError("uplift curve: resolution must be >= 1");
  if (static_cast<std::size_t>(resolution) > std::min(n_treated, n_control)) {
    throw DataError("uplift curve: resolution " + std::to_string(resolution) +
                    " exceeds the smaller arm size " +
                    std::to_string(std::min(n_treated, n_control)));
  }
}

std::vector<double> Gather(std::span<const double> values,
                           const std::vector<std::size_t>& rows) {
  std::vector<double> out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) out[i] = values[rows[i]];
  return out;
}

// Expands per-row multiplicities of a ranked arm into rank-ordered outcomes.
void Expand(const std::vector<double>& ranked_y, const std::vector<std::uint32_t>& counts,
            std::vector<double>* out) {
  out->clear();
  for (std::size_t i = 0; i < ranked_y.size(); ++i) {
    out->insert(out->end(), counts[i], ranked_y[i]);
  }
}

}  // namespace

UpliftCurve ComputeUpliftCurve(std::span<const double> scores, std::span<const double> y,
                               std::span<const double> t, int resolution) {
  CheckLengths(scores, y, t);
  const auto treated = RankedArm(scores, t, 1.0);
  const auto control = RankedArm(scores, t, 0.0);
  if (treated.size() + control.size() != t.size()) {
    throw DataError("treatment must be 0/1");
  }
  CheckResolution(resolution, treated.size(), control.size());
  return CurveFromRanked(Gather(y, treated), Gather(y, control), resolution);
}

double Auuc(const UpliftCurve& curve) {
  if (curve.values.empty()) throw DataError("empty uplift curve");
  double total = 0.0;
  for (double v : curve.values) total += v;
  return total / static_cast<double>(curve.values.size());
}

double Auuc(std::span<const double> scores, std::span<const double> y,
            std::span<const double> t, int resolution) {
  return Auuc(ComputeUpliftCurve(scores, y, t, resolution));
}

MetricResult AuucWithCi(std::span<const double> scores, std::span<const double> y,
                        std::span<const double> t, int resolution, int n_bootstrap,
                        std::uint64_t seed, const BootstrapOptions& options) {
  if (n_bootstrap < 2) throw ConfigError("n_bootstrap must be >= 2");
  if (!(options.confidence > 0.0 && options.confidence < 1.0)) {
    throw ConfigError("confidence must lie in (0, 1)");
  }
  CheckLengths(scores, y, t);
  const auto treated = RankedArm(scores, t, 1.0);
  const auto control = RankedArm(scores, t, 0.0);
  if (treated.size() + control.size() != t.size()) {
    throw DataError("treatment must be 0/1");
  }
  CheckResolution(resolution, treated.size(), control.size());
  const std::vector<double> yt = Gather(y, treated);
  const std::vector<double> yc = Gather(y, control);

  MetricResult result;
  result.value = Auuc(CurveFromRanked(yt, yc, resolution));
  result.n_bootstrap = n_bootstrap;
  result.seed = seed;

  std::vector<double> replicates(static_cast<std::size_t>(n_bootstrap));
  std::vector<int> redraws(static_cast<std::size_t>(n_bootstrap), 0);
  const std::size_t nt = treated.size();
  const std::size_t nc = control.size();
  const auto k = static_cast<std::size_t>(resolution);
  ParallelFor(replicates.size(), options.workers, [&](std::size_t r) {
    Rng rng = MakeRng(seed, r);
    std::vector<std::uint32_t> ct(nt);
    std::vector<std::uint32_t> cc(nc);
    if (options.stratified) {
      std::uniform_int_distribution<std::size_t> pick_t(0, nt - 1);
      std::uniform_int_distribution<std::size_t> pick_c(0, nc - 1);
      for (std::size_t i = 0; i < nt; ++i) ++ct[pick_t(rng)];
      for (std::size_t i = 0; i < nc; ++i) ++cc[pick_c(rng)];
    } else {
      // Draw over all rows; row j < nt is treated rank j, else control rank j - nt.
      std::uniform_int_distribution<std::size_t> pick(0, nt + nc - 1);
      while (true) {
        std::fill(ct.begin(), ct.end(), 0);
        std::fill(cc.begin(), cc.end(), 0);
        std::size_t drawn_t = 0;
        for (std::size_t i = 0; i < nt + nc; ++i) {
          const std::size_t j = pick(rng);
          if (j < nt) {
            ++ct[j];
            ++drawn_t;
          } else {
            ++cc[j - nt];
          }
        }
        if (drawn_t >= k && nt + nc - drawn_t >= k) break;
        ++redraws[r];
        if (redraws[r] > n_bootstrap) break;
      }
    }
    std::vector<double> rt;
    std::vector<double> rc;
    Expand(yt, ct, &rt);
    Expand(yc, cc, &rc);
    if (rt.size() < k || rc.size() < k) {
      replicates[r] = std::nan("");
      return;
    }
    replicates[r] = Auuc(CurveFromRanked(rt, rc, resolution));
  });
  result.redraws = std::accumulate(redraws.begin(), redraws.end(), 0);
  if (2 * result.redraws > n_bootstrap) {
    throw DataError("bootstrap: " + std::to_string(result.redraws) +
                    " replicates redrawn for an empty arm (more than half of " +
                    std::to_string(n_bootstrap) + ")");
  }
  const double alpha = (1.0 - options.confidence) / 2.0;
  result.ci_low = stats::Quantile(replicates, alpha);
  result.ci_high = stats::Quantile(replicates, 1.0 - alpha);
  return result;
}

double Pehe(std::span<const double> tau_true, std::span<const double> tau_pred) {
  if (tau_true.size() != tau_pred.size()) throw DataError("PEHE: length mismatch");
  if (tau_true.empty()) throw DataError("PEHE: empty input");
  double total = 0.0;
  for (std::size_t i = 0; i < tau_true.size(); ++i) {
    const double e = tau_true[i] - tau_pred[i];
    total += e * e;
  }
  return std::sqrt(total / static_cast<double>(tau_true.size()));
}

double PolicyRisk(std::span<const double> scores, std::span<const double> y,
                  std::span<const double> t, double threshold) {
  CheckLengths(scores, y, t);
  double sum_treat = 0.0;
  double sum_control = 0.0;
  std::size_t n_treat = 0;
  std::size_t n_control = 0;
  std::size_t n_policy = 0;
  std::size_t arms[2] = {0, 0};
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool treat = scores[i] > threshold;
    if (treat) ++n_policy;
    ++arms[t[i] == 1.0 ? 1 : 0];
    if (treat && t[i] == 1.0) {
      sum_treat += y[i];
      ++n_treat;
    } else if (!treat && t[i] == 0.0) {
      sum_control += y[i];
      ++n_control;
    }
  }
  if (arms[0] == 0 || arms[1] == 0) throw DataError("policy risk: empty arm");
  const auto n = static_cast<double>(scores.size());
  const double p_treat = static_cast<double>(n_policy) / n;
  double value = 0.0;
  if (n_treat > 0) {
    value += sum_treat / static_cast<double>(n_treat) * p_treat;
  } else if (n_policy > 0) {
    Warn("policy risk: no treated rows among those the policy treats");
  }
  if (n_control > 0) {
    value += sum_control / static_cast<double>(n_control) * (1.0 - p_treat);
  } else if (n_policy < scores.size()) {
    Warn("policy risk: no control rows among those the policy leaves untreated");
  }
  return 1.0 - value;
}

double Ate(std::span<const double> y, std::span<const double> t, AteMode mode,
           std::span<const double> propensity) {
  if (y.size() != t.size()) throw DataError("ATE: length mismatch");
  if (mode == AteMode::kDiffMeans) {
    double s[2] = {0.0, 0.0};
    std::size_t c[2] = {0, 0};
    for (std::size_t i = 0; i < y.size(); ++i) {
      const int arm = t[i] == 1.0 ? 1 : 0;
      s[arm] += y[i];
      ++c[arm];
    }
    if (c[0] == 0 || c[1] == 0) throw DataError("ATE: empty arm");
    return s[1] / static_cast<double>(c[1]) - s[0] / static_cast<double>(c[0]);
  }
  if (propensity.size() != y.size()) {
    throw DataError("ATE: IPW needs one propensity per row");
  }
  if (y.empty()) throw DataError("ATE: empty input");
  double total = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double p = propensity[i];
    if (!(p > 0.0 && p < 1.0)) {
      throw DataError("ATE: propensity " + std::to_string(p) + " at row " +
                      std::to_string(i) + " is outside (0, 1)");
    }
    total += y[i] * t[i] / p - y[i] * (1.0 - t[i]) / (1.0 - p);
  }
  return total / static_cast<double>(y.size());
}

nlohmann::json ToJson(const MetricResult& result) {
  nlohmann::json j;
  j["value"] = result.value;
  j["ci_low"] = result.ci_low ? nlohmann::json(*result.ci_low) : nlohmann::json();
  j["ci_high"] = result.ci_high ? nlohmann::json(*result.ci_high) : nlohmann::json();
  j["n_bootstrap"] = result.n_bootstrap;
  j["seed"] = result.seed;
  j["redraws"] = result.redraws;
  return j;
}

}  // namespace upliftbench
