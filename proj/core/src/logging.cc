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

#include "upliftbench/logging.h"

#include <iostream>
#include <mutex>
#include <utility>

namespace upliftbench {
namespace {

std::mutex& SinkMutex() {
  static std::mutex mutex;
  return mutex;
}

WarningSink& CurrentSink() {
  static WarningSink sink;
  return sink;
}

}  // namespace

void Warn(std::string_view message) {
  std::lock_guard lock(SinkMutex());
  if (CurrentSink()) {
    CurrentSink()(message);
  } else {
    std::cerr << "warning: " << message << '\n';
  }
}

WarningSink SetWarningSink(WarningSink sink) {
  std::lock_guard lock(SinkMutex());
  return std::exchange(CurrentSink(), std::move(sink));
}

ScopedWarningCapture::ScopedWarningCapture()
    : previous_(SetWarningSink([this](std::string_view message) {
        messages_.emplace_back(message);
      })) {}

ScopedWarningCapture::~ScopedWarningCapture() {
  SetWarningSink(std::move(previous_));
}

}  // namespace upliftbench
