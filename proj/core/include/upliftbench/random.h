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

#ifndef UPLIFTBENCH_RANDOM_H_
#define UPLIFTBENCH_RANDOM_H_

#include <cstdint>
#include <random>

namespace upliftbench {

using Rng = std::mt19937_64;

// Independent generator for stream `stream` of a seeded computation. Every
// parallelizable unit of work (replicate, permutation, realization) draws
// from its own stream so results do not depend on the worker count.
Rng MakeRng(std::uint64_t seed, std::uint64_t stream = 0);

// Derives a child seed; used to give nested computations disjoint streams.
std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t stream);

// Finalizer of splitmix64.
constexpr std::uint64_t Mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

inline Rng MakeRng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

inline std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t stream) {
  return Mix64(seed + 0x9e3779b97f4a7c15ULL * (stream + 1));
}

}  // namespace upliftbench

#endif  // UPLIFTBENCH_RANDOM_H_
