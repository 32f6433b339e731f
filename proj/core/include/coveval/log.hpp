/*
 * Copyright 2026 The CovEval Toolkit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <string>

namespace coveval {

enum class LogLevel { kError = 0, kWarn = 1, kInfo = 2, kDebug = 3 };

/// Effective verbosity. Initialized once from the COVEVAL_LOG environment
/// variable ("error", "warn", "info", "debug"); defaults to "warn".
LogLevel log_level();

/// Overrides the level for the rest of the process (tests use this).
void set_log_level(LogLevel level);

void log_message(LogLevel level, const std::string& message);

inline void log_error(const std::string& message) {
  log_message(LogLevel::kError, message);
}
inline void log_warn(const std::string& message) {
  log_message(LogLevel::kWarn, message);
}
inline void log_info(const std::string& message) {
  log_message(LogLevel::kInfo, message);
}
inline void log_debug(const std::string& message) {
  log_message(LogLevel::kDebug, message);
}

}  // namespace coveval
