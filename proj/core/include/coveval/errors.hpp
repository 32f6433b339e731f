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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace coveval {

/// Base class for all toolkit errors. Everything thrown on purpose derives
/// from this, so callers can catch one type at the CLI boundary.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A box violates x1 < x2, y1 < y2 (degenerate or inverted rectangle).
class invalid_box_error : public error {
 public:
  using error::error;
};

/// A configuration value is out of its documented range.
class config_error : public error {
 public:
  using error::error;
};

/// Detections/ground truths from different images or classes were mixed
/// into one per-image matching group.
class mixed_group_error : public error {
 public:
  using error::error;
};

/// Structured parse failure with source name and 1-based line number
/// (line 0 means "location unknown").
class parse_error : public error {
 public:
  parse_error(const std::string& message, std::string source, std::size_t line)
      : error(format(message, source, line)),
        source_(std::move(source)),
        line_(line) {}

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& message,
                            const std::string& source, std::size_t line) {
    std::string out = source;
    if (line > 0) {
      out += ":" + std::to_string(line);
    }
    out += ": " + message;
    return out;
  }

  std::string source_;
  std::size_t line_;
};

/// A versioned on-disk document carries an unsupported schema_version.
class format_error : public error {
 public:
  using error::error;
};

/// A fractal point index (n, k) is outside its valid range.
class invalid_index_error : public error {
 public:
  using error::error;
};

/// A subcurve window contains fewer than two points.
class window_error : public error {
 public:
  using error::error;
};

/// Scene synthesis produced no usable annotation (stride exceeds curve length).
class empty_scene_error : public error {
 public:
  using error::error;
};

/// A configured resource cap (e.g. the curve point budget) would be exceeded.
class resource_error : public error {
 public:
  using error::error;
};

/// A statistical fit is degenerate and no estimate can be produced.
class estimation_error : public error {
 public:
  using error::error;
};

}  // namespace coveval
