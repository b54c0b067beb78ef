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

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "upliftbench/metrics.h"

namespace upliftbench {
namespace {

struct Data {
  std::vector<double> s, y, t;
};

Data MakeData(std::size_t n) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u;
  Data d;
  for (std::size_t i = 0; i < n; ++i) {
    d.s.push_back(u(rng));
    d.t.push_back(u(rng) < 0.85);
    d.y.push_back(u(rng) < 0.05 + 0.02 * d.s.back());
  }
  return d;
}

void BM_Auuc(benchmark::State& state) {
  const Data d = MakeData(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(Auuc(d.s, d.y, d.t, 100));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Auuc)->Arg(1000)->Arg(20000)->Arg(1000000);

void BM_AuucWithCi(benchmark::State& state) {
  const Data d = MakeData(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(AuucWithCi(d.s, d.y, d.t, 100, 200, 7));
  }
}
BENCHMARK(BM_AuucWithCi)->Arg(1000)->Arg(20000)->Unit(benchmark::kMillisecond);

void BM_Pehe(benchmark::State& state) {
  const Data d = MakeData(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(Pehe(d.s, d.y));
  }
}
BENCHMARK(BM_Pehe)->Arg(100000);

}  // namespace
}  // namespace upliftbench
