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

#ifndef UPLIFTBENCH_LOGGING_H_
#define UPLIFTBENCH_LOGGING_H_

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace upliftbench {

using WarningSink = std::function<void(std::string_view)>;

// Emits a warning. Goes to stderr unless a sink is installed.
void Warn(std::string_view message);

// Installs a sink for warnings and returns the previous one. Passing an empty
// function restores the stderr sink.
WarningSink SetWarningSink(WarningSink sink);

// Counts warnings emitted during its lifetime (used by tests and reports).
class ScopedWarningCapture {
 public:
  ScopedWarningCapture();
  ~ScopedWarningCapture();
  ScopedWarningCapture(const ScopedWarningCapture&) = delete;
  ScopedWarningCapture& operator=(const ScopedWarningCapture&) = delete;

  const std::vector<std::string>& messages() const { return messages_; }

 private:
  std::vector<std::string> messages_;
  WarningSink previous_;
};

}  // namespace upliftbench

#endif  // UPLIFTBENCH_LOGGING_H_
