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

#include "upliftbench/csv_io.h"

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <memory>
#include <string_view>
#include <unordered_map>

#include <yaml-cpp/yaml.h>

#include "upliftbench/errors.h"
#include "upliftbench/logging.h"

namespace upliftbench {
namespace {

struct GzCloser {
  void operator()(gzFile_s* f) const {
    if (f != nullptr) gzclose(f);
  }
};
using GzFile = std::unique_ptr<gzFile_s, GzCloser>;

// Reads lines from a plain or gzip-compressed file.
class LineReader {
 public:
  explicit LineReader(const std::filesystem::path& path)
      : file_(gzopen(path.c_str(), "rb")) {
    if (!file_) throw Error("cannot open " + path.string());
    gzbuffer(file_.get(), 1 << 20);
  }

  bool Next(std::string* line) {
    line->clear();
    char buffer[1 << 16];
    while (gzgets(file_.get(), buffer, sizeof(buffer)) != nullptr) {
      line->append(buffer);
      if (!line->empty() && line->back() == '\n') break;
    }
    if (line->empty()) {
      int code = 0;
      const char* message = gzerror(file_.get(), &code);
      if (code != Z_OK && code != Z_STREAM_END) {
        throw Error(std::string("read error: ") + message);
      }
      return false;
    }
    while (!line->empty() && (line->back() == '\n' || line->back() == '\r')) {
      line->pop_back();
    }
    return true;
  }

 private:
  GzFile file_;
};

void SplitFields(std::string_view line, std::vector<std::string_view>* fields) {
  fields->clear();
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields->push_back(line.substr(start));
      return;
    }
    fields->push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '"')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '"')) s.remove_suffix(1);
  return s;
}

bool ParseDouble(std::string_view cell, double* value) {
  cell = Trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  const auto [ptr, ec] =
      std::from_chars(cell.data(), cell.data() + cell.size(), *value);
  return ec == std::errc() && ptr == cell.data() + cell.size() && !cell.empty() &&
         std::isfinite(*value);
}

bool ParseCode(std::string_view cell, std::int64_t* value) {
  cell = Trim(cell);
  const auto [ptr, ec] =
      std::from_chars(cell.data(), cell.data() + cell.size(), *value);
  if (ec == std::errc() && ptr == cell.data() + cell.size() && !cell.empty()) {
    return *value >= 0;
  }
  // Accept integral values written in floating-point form ("3.0").
  double d = 0.0;
  if (!ParseDouble(cell, &d) || d < 0 || d != std::floor(d) || d > 9.0e15) {
    return false;
  }
  *value = static_cast<std::int64_t>(d);
  return true;
}

std::uint8_t ParseFlag(std::string_view cell, std::string_view column,
                       std::size_t row) {
  double v = 0.0;
  if (!ParseDouble(cell, &v) || (v != 0.0 && v != 1.0)) {
    throw ParseError("column '" + std::string(column) + "' expects 0 or 1, got '" +
                         std::string(cell) + "'",
                     row);
  }
  return v == 1.0 ? 1 : 0;
}

std::size_t ColumnIndex(const std::unordered_map<std::string, std::size_t>& header,
                        const std::string& name) {
  const auto it = header.find(name);
  if (it == header.end()) {
    throw SchemaError("missing column '" + name + "'");
  }
  return it->second;
}

}  // namespace

std::string FormatDouble(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) throw Error("cannot format double");
  return std::string(buffer, ptr);
}

CsvSchema LoadCsvSchema(const std::filesystem::path& path) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(path.string());
  } catch (const YAML::Exception& e) {
    throw ConfigError("schema descriptor " + path.string() + ": " + e.what());
  }
  CsvSchema schema;
  try {
    if (root["features"]) {
      schema.features = root["features"].as<std::vector<std::string>>();
    }
    if (root["continuous"]) {
      const auto names = root["continuous"].as<std::vector<std::string>>();
      if (names.size() != kNumContinuous) {
        throw ConfigError("schema descriptor: expected 4 continuous columns");
      }
      std::copy(names.begin(), names.end(), schema.continuous.begin());
    }
    if (root["categorical"]) {
      const auto names = root["categorical"].as<std::vector<std::string>>();
      if (names.size() != kNumCategorical) {
        throw ConfigError("schema descriptor: expected 8 categorical columns");
      }
      std::copy(names.begin(), names.end(), schema.categorical.begin());
    }
    for (auto [key, field] :
         {std::pair{"treatment", &schema.treatment},
          std::pair{"conversion", &schema.conversion},
          std::pair{"visit", &schema.visit}, std::pair{"exposure", &schema.exposure},
          std::pair{"outcome", &schema.outcome}}) {
      if (root[key]) *field = root[key].as<std::string>();
    }
    if (root["dictionary_encode_categoricals"]) {
      schema.dictionary_encode_categoricals =
          root["dictionary_encode_categoricals"].as<bool>();
    }
  } catch (const YAML::Exception& e) {
    throw ConfigError("schema descriptor " + path.string() + ": " + e.what());
  }
  return schema;
}

Dataset LoadCsv(const std::filesystem::path& path, const CsvOptions& options) {
  const CsvSchema& schema = options.schema;
  LineReader reader(path);
  std::string line;
  if (!reader.Next(&line)) throw SchemaError(path.string() + ": empty file");

  std::vector<std::string_view> fields;
  SplitFields(line, &fields);
  std::unordered_map<std::string, std::size_t> header;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    header.emplace(std::string(Trim(fields[i])), i);
  }

  std::array<std::size_t, kNumContinuous> cont_col{};
  std::array<std::size_t, kNumCategorical> cat_col{};
  for (int j = 0; j < kNumContinuous; ++j) {
    cont_col[j] = ColumnIndex(header, schema.continuous[j]);
  }
  for (int j = 0; j < kNumCategorical; ++j) {
    cat_col[j] = ColumnIndex(header, schema.categorical[j]);
  }
  const std::size_t t_col = ColumnIndex(header, schema.treatment);
  const std::size_t c_col = ColumnIndex(header, schema.conversion);
  const std::size_t v_col = ColumnIndex(header, schema.visit);
  const std::size_t e_col = ColumnIndex(header, schema.exposure);
  const auto y_it = header.find(schema.outcome);
  const bool has_outcome = y_it != header.end();

  std::array<std::unordered_map<double, std::int64_t>, kNumCategorical> dictionary;
  std::vector<Sample> samples;
  std::vector<double> outcome;
  std::size_t row = 0;
  while (reader.Next(&line)) {
    if (line.empty()) continue;
    ++row;
    SplitFields(line, &fields);
    if (fields.size() != header.size()) {
      throw ParseError("expected " + std::to_string(header.size()) +
                           " fields, found " + std::to_string(fields.size()),
                       row);
    }
    Sample s;
    for (int j = 0; j < kNumContinuous; ++j) {
      if (!ParseDouble(fields[cont_col[j]], &s.continuous[j])) {
        throw ParseError("column '" + schema.continuous[j] +
                             "' expects a real number, got '" +
                             std::string(fields[cont_col[j]]) + "'",
                         row);
      }
    }
    for (int j = 0; j < kNumCategorical; ++j) {
      const std::string_view cell = fields[cat_col[j]];
      if (schema.dictionary_encode_categoricals) {
        double v = 0.0;
        if (!ParseDouble(cell, &v)) {
          throw ParseError("column '" + schema.categorical[j] +
                               "' expects a number, got '" + std::string(cell) + "'",
                           row);
        }
        auto [it, inserted] = dictionary[j].try_emplace(
            v, static_cast<std::int64_t>(dictionary[j].size()));
        s.categorical[j] = it->second;
      } else if (!ParseCode(cell, &s.categorical[j])) {
        throw ParseError("column '" + schema.categorical[j] +
                             "' expects a non-negative integer code, got '" +
                             std::string(cell) + "'",
                         row);
      }
    }
    s.treatment = ParseFlag(fields[t_col], schema.treatment, row);
    s.conversion = ParseFlag(fields[c_col], schema.conversion, row);
    s.visit = ParseFlag(fields[v_col], schema.visit, row);
    s.exposure = ParseFlag(fields[e_col], schema.exposure, row);
    if (has_outcome) {
      double y = 0.0;
      if (!ParseDouble(fields[y_it->second], &y)) {
        throw ParseError("column '" + schema.outcome + "' expects a real number",
                         row);
      }
      outcome.push_back(y);
    }
    samples.push_back(s);
  }

  Dataset dataset(std::move(samples), {}, std::move(outcome));
  const ConstraintReport report = ValidateConstraints(dataset);
  if (report.total() > 0) {
    Warn(path.string() + ": " + std::to_string(report.exposed_controls) +
         " exposed control rows, " +
         std::to_string(report.conversions_without_visit) +
         " conversions without visit");
  }
  return dataset;
}

void WriteCsv(const Dataset& dataset, const std::filesystem::path& path,
              const CsvOptions& options) {
  const CsvSchema& schema = options.schema;
  // Feature position in the file -> (is_continuous, index within role).
  std::vector<std::pair<bool, int>> layout;
  for (const std::string& name : schema.features) {
    const auto c = std::find(schema.continuous.begin(), schema.continuous.end(), name);
    const auto k = std::find(schema.categorical.begin(), schema.categorical.end(), name);
    if (c != schema.continuous.end()) {
      layout.emplace_back(true, static_cast<int>(c - schema.continuous.begin()));
    } else if (k != schema.categorical.end()) {
      layout.emplace_back(false, static_cast<int>(k - schema.categorical.begin()));
    } else {
      throw SchemaError("feature '" + name + "' has no role in the schema");
    }
  }

  std::string text;
  for (const std::string& name : schema.features) text += name + ",";
  text += schema.treatment + "," + schema.conversion + "," + schema.visit + "," +
          schema.exposure;
  const bool with_outcome = dataset.has_continuous_outcome();
  if (with_outcome) text += "," + schema.outcome;
  text += '\n';

  const auto outcome = dataset.continuous_outcome();
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const Sample& s = dataset[i];
    for (const auto& [continuous, index] : layout) {
      text += continuous ? FormatDouble(s.continuous[index])
                         : std::to_string(s.categorical[index]);
      text += ',';
    }
    text += static_cast<char>('0' + s.treatment);
    text += ',';
    text += static_cast<char>('0' + s.conversion);
    text += ',';
    text += static_cast<char>('0' + s.visit);
    text += ',';
    text += static_cast<char>('0' + s.exposure);
    if (with_outcome) {
      text += ',';
      text += FormatDouble(outcome[i]);
    }
    text += '\n';
  }

  if (options.gzip) {
    GzFile file(gzopen(path.c_str(), "wb"));
    if (!file) throw Error("cannot open " + path.string() + " for writing");
    constexpr std::size_t kChunk = 1 << 20;
    for (std::size_t pos = 0; pos < text.size(); pos += kChunk) {
      const auto len = static_cast<unsigned>(std::min(kChunk, text.size() - pos));
      if (gzwrite(file.get(), text.data() + pos, len) != static_cast<int>(len)) {
        throw Error("write error on " + path.string());
      }
    }
  } else {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw Error("write error on " + path.string());
  }
}

}  // namespace upliftbench
