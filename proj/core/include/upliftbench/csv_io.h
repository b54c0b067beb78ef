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

#ifndef UPLIFTBENCH_CSV_IO_H_
#define UPLIFTBENCH_CSV_IO_H_

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "upliftbench/dataset.h"

namespace upliftbench {

// Maps column names of a CSV file to roles. The defaults describe the public
// uplift corpus: f0..f11, with f0, f2, f7 and f10 real-valued.
struct CsvSchema {
  // Feature columns in file order; each one must appear in exactly one of
  // `continuous` or `categorical`.
  std::vector<std::string> features = {"f0", "f1", "f2", "f3", "f4",  "f5",
                                       "f6", "f7", "f8", "f9", "f10", "f11"};
  std::array<std::string, kNumContinuous> continuous = {"f0", "f2", "f7",
                                                        "f10"};
  std::array<std::string, kNumCategorical> categorical = {
      "f1", "f3", "f4", "f5", "f6", "f8", "f9", "f11"};
  std::string treatment = "treatment";
  std::string conversion = "conversion";
  std::string visit = "visit";
  std::string exposure = "exposure";
  // Optional real-valued outcome column written for semi-synthetic data.
  std::string outcome = "y";
  // When true, categorical cells may hold arbitrary numbers and are mapped to
  // codes 0, 1, ... in order of first appearance per column. Otherwise they
  // must be non-negative integers.
  bool dictionary_encode_categoricals = false;
};

// Reads a schema descriptor (YAML key-value text). Missing keys keep their
// default value.
CsvSchema LoadCsvSchema(const std::filesystem::path& path);

struct CsvOptions {
  // Compress output with gzip. Input is decompressed transparently whether or
  // not this is set.
  bool gzip = false;
  CsvSchema schema;
};

// Loads a dataset. Throws SchemaError when a required column is missing and
// ParseError (with the 1-based data row number) for malformed cells.
// Constraint violations are reported through Warn(), not thrown.
Dataset LoadCsv(const std::filesystem::path& path, const CsvOptions& options = {});

// Writes the dataset with a header row. The outcome column is written only
// when the dataset carries one.
void WriteCsv(const Dataset& dataset, const std::filesystem::path& path,
              const CsvOptions& options = {});

// Shortest decimal representation that parses back to the same double.
std::string FormatDouble(double value);

}  // namespace upliftbench

#endif  // UPLIFTBENCH_CSV_IO_H_
