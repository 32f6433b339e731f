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

#include <iosfwd>
#include <string>

#include "coveval/metrics.hpp"

namespace coveval {

inline constexpr int kReportSchemaVersion = 1;

/// Serializes a report to the versioned JSON document (undefined scores
/// become null, object keys are sorted, doubles keep full precision).
std::string report_to_json(const EvalReport& report);

/// Parses a report document; unsupported schema_version raises
/// format_error, malformed JSON raises parse_error.
EvalReport report_from_json(std::istream& in,
                            const std::string& source_name = "<report>");

/// Human-readable percent table (one decimal, "n/a" for undefined),
/// with per-class rows and the class-mean row.
std::string render_report_table(const EvalReport& report);

/// Long-format CSV: class,metric,value rows with raw fractional values;
/// the class-mean rows use the class name "mean".
std::string render_report_csv(const EvalReport& report);

/// Side-by-side standard comparison CSV: per class, the paper-style AP,
/// the covering F_ext at rank_mu, each class's rank under both standards
/// (1 = best; ties broken by class name) and the rank delta. Requires a
/// report computed with both standards.
std::string render_compare_csv(const EvalReport& report, double rank_mu);

}  // namespace coveval
