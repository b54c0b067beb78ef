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

#ifndef UPLIFTBENCH_ERRORS_H_
#define UPLIFTBENCH_ERRORS_H_

#include <stdexcept>
#include <string>

namespace upliftbench {

// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input file does not follow the expected column layout.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// A cell or a line of an input file could not be parsed.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t row)
      : Error("row " + std::to_string(row) + ": " + message), row_(row) {}
  // For inputs without rows; row() is then 0.
  explicit ParseError(const std::string& message) : Error(message), row_(0) {}

  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

// The data violates a precondition of an operation (empty arm, undersized
// stratum, non-binary label, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

// Numerical failure while fitting or calibrating a model.
class FitError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace upliftbench

#endif  // UPLIFTBENCH_ERRORS_H_
