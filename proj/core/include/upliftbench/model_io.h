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

#ifndef UPLIFTBENCH_MODEL_IO_H_
#define UPLIFTBENCH_MODEL_IO_H_

#include <filesystem>
#include <iosfwd>
#include <string>

#include "upliftbench/uplift_learners.h"

namespace upliftbench {

// Plain-text scorer format. Numbers are written with 17 significant digits so
// a loaded scorer reproduces the original scores bit for bit:
//
//   upliftbench-scorer 1
//   method x_learner
//   treatment_ratio 0.5
//   constant_propensity none
//   config outcome ridge 1 500 1e-06 0
//   ...
//   block tau0 ridge 34
//   intercept 4.0000000000000000
//   weights 0.1 0.2 ...
//   end
void WriteScorer(const UpliftScorer& scorer, std::ostream& out);
UpliftScorer ReadScorer(std::istream& in);

void SaveScorer(const UpliftScorer& scorer, const std::filesystem::path& path);
UpliftScorer LoadScorer(const std::filesystem::path& path);

}  // namespace upliftbench

#endif  // UPLIFTBENCH_MODEL_IO_H_
