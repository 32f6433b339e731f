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

#include "coveval/metrics.hpp"

#include <cmath>

#include "coveval/errors.hpp"
#include "coveval/log.hpp"

namespace coveval {

namespace {

/// Mean of the defined values; nullopt when none is defined.
std::optional<double> mean_defined(std::span<const ImageScore> scores,
                                   std::optional<double> ImageScore::*field) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& score : scores) {
    if (const auto& value = score.*field) {
      sum += *value;
      ++count;
    }
  }
  if (count == 0) return std::nullopt;
  return sum / static_cast<double>(count);
}

std::optional<double> lookup_mu(
    const std::vector<std::pair<double, std::optional<double>>>& table,
    double mu) {
  for (const auto& [key, value] : table) {
    if (key == mu) return value;
  }
  return std::nullopt;
}

}  // namespace

XScores image_scores(const MultiMatchResult& result) {
  XScores scores;
  if (result.m > 0) {
    // With n == 0 every row is a false alarm and k_p is 0, so this is
    // the required XP = 0 for detections on an empty target set.
    scores.xp = static_cast<double>(result.k_p) / static_cast<double>(result.m);
  }
  if (result.n > 0) {
    scores.xr = static_cast<double>(result.k_r) / static_cast<double>(result.n);
  }
  return scores;
}

std::optional<double> ClassScore::f_ext_at(double mu) const {
  return lookup_mu(f_ext, mu);
}

std::optional<double> EvalReport::mf_ext_at(double mu) const {
  return lookup_mu(mf_ext, mu);
}

ClassScore aggregate_class(std::string class_id,
                           std::span<const ImageScore> scores,
                           std::span<const double> mu_list) {
  if (scores.empty()) {
    throw config_error("aggregate_class: empty image-score list for class " +
                       class_id);
  }
  ClassScore cls;
  cls.class_id = std::move(class_id);
  cls.axp = mean_defined(scores, &ImageScore::xp);
  cls.axr = mean_defined(scores, &ImageScore::xr);
  cls.ap = mean_defined(scores, &ImageScore::p_map);
  for (const double mu : mu_list) {
    std::optional<double> value;
    if (cls.axp && cls.axr) {
      value = f_ext_mu(*cls.axp, *cls.axr, mu);
    }
    cls.f_ext.emplace_back(mu, value);
  }
  return cls;
}

EvalReport aggregate_all(std::vector<ClassScore> classes) {
  if (classes.empty()) {
    throw config_error("aggregate_all: no classes to aggregate");
  }
  EvalReport report;

  auto mean_over_classes =
      [&](auto getter) -> std::optional<double> {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& cls : classes) {
      if (const auto value = getter(cls)) {
        sum += *value;
        ++count;
      }
    }
    if (count == 0) return std::nullopt;
    return sum / static_cast<double>(count);
  };

  report.maxr = mean_over_classes([](const ClassScore& c) { return c.axr; });
  report.maxp = mean_over_classes([](const ClassScore& c) { return c.axp; });
  report.map = mean_over_classes([](const ClassScore& c) { return c.ap; });

  // F_ext is per-class-then-averaged; the mu axis comes from the first
  // class (all classes share one mu list by construction).
  for (const auto& [mu, unused] : classes.front().f_ext) {
    auto value = mean_over_classes(
        [mu = mu](const ClassScore& c) { return c.f_ext_at(mu); });
    report.mf_ext.emplace_back(mu, value);
  }

  report.per_class = std::move(classes);
  return report;
}

double f_ext_mu(double xp, double xr, double mu, bool* degenerate) {
  if (degenerate != nullptr) *degenerate = false;
  if (!(mu >= 0.0 && mu <= 1.0)) {
    throw config_error("mu must lie in [0, 1]");
  }
  if (!(xp >= 0.0 && xp <= 1.0) || !(xr >= 0.0 && xr <= 1.0)) {
    throw config_error("XP and XR must lie in [0, 1]");
  }
  if (mu == 0.0 || mu == 1.0) {
    log_warn("mu = " + std::to_string(mu) +
             " is deprecated: the score then ignores one of XP/XR entirely");
  }
  if (xp == 0.0 && xr == 0.0) {
    if (degenerate != nullptr) *degenerate = true;
    log_debug("F_ext with XP = XR = 0 is degenerate; reporting 0");
    return 0.0;
  }
  const double numerator =
      std::pow(xp, 2.0 * (1.0 - mu)) * std::pow(xr, 2.0 * mu);
  const double denominator = (1.0 - mu) * xp + mu * xr;
  return numerator / denominator;
}

double mu_preset(std::string_view name) {
  if (name == "avoid-false-alarm") return 0.05;
  if (name == "balanced") return 0.5;
  if (name == "avoid-missing") return 0.8;
  if (name == "strongly-avoid-missing") return 0.95;
  throw config_error(
      "unknown mu preset '" + std::string(name) +
      "'; valid presets: avoid-false-alarm, balanced, avoid-missing, "
      "strongly-avoid-missing");
}

}  // namespace coveval
