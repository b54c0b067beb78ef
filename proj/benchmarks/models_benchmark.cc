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

#include <filesystem>

#include <benchmark/benchmark.h>

#include "upliftbench/csv_io.h"
#include "upliftbench/encoding.h"
#include "upliftbench/linear_models.h"
#include "upliftbench/synthgen.h"
#include "upliftbench/uplift_learners.h"

namespace upliftbench {
namespace {

GeneratedData MakeData(std::size_t n) {
  GeneratorConfig config;
  config.n = n;
  config.seed = 3;
  config.assignment = AssignmentMode::kRct;
  return GenerateIteDataset(config);
}

void BM_FitLogistic(benchmark::State& state) {
  const GeneratedData g = MakeData(static_cast<std::size_t>(state.range(0)));
  const Eigen::VectorXd t = g.dataset.Treatments();
  BaseLearnerConfig config{BaseKind::kLogistic, 1.0, 300, 1e-5};
  for (auto _ : state) {
    benchmark::DoNotOptimize(FitLogistic(g.encoded.values(), t, config));
  }
}
BENCHMARK(BM_FitLogistic)->Arg(5000)->Arg(50000)->Unit(benchmark::kMillisecond);

void BM_FitRidge(benchmark::State& state) {
  const GeneratedData g = MakeData(static_cast<std::size_t>(state.range(0)));
  const Eigen::VectorXd y = g.dataset.Outcomes(OutcomeKind::kContinuous);
  for (auto _ : state) {
    benchmark::DoNotOptimize(FitRidge(g.encoded.values(), y, 1.0));
  }
}
BENCHMARK(BM_FitRidge)->Arg(20000)->Unit(benchmark::kMillisecond);

void BM_FitMetaLearner(benchmark::State& state) {
  const GeneratedData g = MakeData(20000);
  const Eigen::VectorXd t = g.dataset.Treatments();
  const Eigen::VectorXd y = g.dataset.Outcomes(OutcomeKind::kContinuous);
  const auto method = static_cast<UpliftMethod>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(FitUplift(method, g.encoded.values(), y, t, {}));
  }
  state.SetLabel(std::string(UpliftMethodName(method)));
}
BENCHMARK(BM_FitMetaLearner)
    ->Arg(static_cast<int>(UpliftMethod::kTLearner))
    ->Arg(static_cast<int>(UpliftMethod::kXLearner))
    ->Arg(static_cast<int>(UpliftMethod::kRLearner))
    ->Arg(static_cast<int>(UpliftMethod::kDrLearner))
    ->Unit(benchmark::kMillisecond);

void BM_Encode(benchmark::State& state) {
  const Dataset d = GenerateCovariates(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(Encode(d, {}));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Encode)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_CsvRoundTrip(benchmark::State& state) {
  const Dataset d = GenerateCovariates(static_cast<std::size_t>(state.range(0)), 2);
  const auto path = std::filesystem::temp_directory_path() / "upliftbench_bench.csv";
  for (auto _ : state) {
    WriteCsv(d, path);
    benchmark::DoNotOptimize(LoadCsv(path));
  }
  std::filesystem::remove(path);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CsvRoundTrip)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace upliftbench
