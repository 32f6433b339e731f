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

#include <gtest/gtest.h>

#include <cmath>

#include "coveval/errors.hpp"
#include "coveval/log.hpp"

namespace coveval {
namespace {

MultiMatchResult mm(std::size_t k_p, std::size_t m, std::size_t k_r,
                    std::size_t n) {
  MultiMatchResult r;
  r.k_p = k_p;
  r.m = m;
  r.k_r = k_r;
  r.n = n;
  return r;
}

ImageScore score_with(std::optional<double> xp, std::optional<double> xr,
                      std::optional<double> p_map = std::nullopt) {
  ImageScore s;
  s.image_id = "img";
  s.class_id = "c";
  s.xp = xp;
  s.xr = xr;
  s.p_map = p_map;
  return s;
}

TEST(ImageXScores, Examples) {
  const auto perfect = image_scores(mm(2, 2, 2, 2));
  EXPECT_DOUBLE_EQ(perfect.xp.value(), 1.0);
  EXPECT_DOUBLE_EQ(perfect.xr.value(), 1.0);

  const auto half = image_scores(mm(1, 2, 2, 2));
  EXPECT_DOUBLE_EQ(half.xp.value(), 0.5);
  EXPECT_DOUBLE_EQ(half.xr.value(), 1.0);

  // Silent detector: XP undefined, XR = 0.
  const auto silent = image_scores(mm(0, 0, 0, 3));
  EXPECT_FALSE(silent.xp.has_value());
  EXPECT_DOUBLE_EQ(silent.xr.value(), 0.0);

  // Detections on an image without targets: all false alarms, XP = 0,
  // XR undefined.
  const auto false_alarms = image_scores(mm(0, 4, 0, 0));
  EXPECT_DOUBLE_EQ(false_alarms.xp.value(), 0.0);
  EXPECT_FALSE(false_alarms.xr.has_value());
}

TEST(AggregateClass, MeanOverImages) {
  const std::vector<ImageScore> scores{score_with(1.0, 1.0),
                                       score_with(0.5, 0.8),
                                       score_with(0.75, 0.6)};
  const double mus[] = {0.5};
  const auto cls = aggregate_class("crack", scores, mus);
  EXPECT_DOUBLE_EQ(cls.axr.value(), 0.8);
  EXPECT_DOUBLE_EQ(cls.axp.value(), 0.75);
  EXPECT_FALSE(cls.ap.has_value());
}

TEST(AggregateClass, SkipsUndefinedValues) {
  const std::vector<ImageScore> scores{score_with(1.0, 1.0),
                                       score_with(std::nullopt, 0.0),
                                       score_with(0.5, 1.0)};
  const double mus[] = {0.5};
  const auto cls = aggregate_class("crack", scores, mus);
  EXPECT_DOUBLE_EQ(cls.axp.value(), 0.75);  // mean of {1.0, 0.5}
  EXPECT_NEAR(cls.axr.value(), 2.0 / 3.0, 1e-15);
}

TEST(AggregateClass, AllUndefinedReportsNotAvailable) {
  const std::vector<ImageScore> scores{score_with(std::nullopt, std::nullopt),
                                       score_with(std::nullopt, std::nullopt)};
  const double mus[] = {0.5};
  const auto cls = aggregate_class("crack", scores, mus);
  EXPECT_FALSE(cls.axp.has_value());
  EXPECT_FALSE(cls.axr.has_value());
  EXPECT_FALSE(cls.ap.has_value());
  EXPECT_FALSE(cls.f_ext_at(0.5).has_value());
}

TEST(AggregateClass, SingleImagePerfect) {
  const std::vector<ImageScore> scores{score_with(1.0, 1.0, 1.0)};
  const double mus[] = {0.5, 0.8};
  const auto cls = aggregate_class("crack", scores, mus);
  EXPECT_DOUBLE_EQ(cls.axp.value(), 1.0);
  EXPECT_DOUBLE_EQ(cls.axr.value(), 1.0);
  EXPECT_DOUBLE_EQ(cls.ap.value(), 1.0);
  EXPECT_DOUBLE_EQ(cls.f_ext_at(0.5).value(), 1.0);
  EXPECT_DOUBLE_EQ(cls.f_ext_at(0.8).value(), 1.0);
}

TEST(AggregateClass, EmptyListIsAnError) {
  const double mus[] = {0.5};
  EXPECT_THROW(aggregate_class("crack", {}, mus), config_error);
}

TEST(AggregateAll, ClassMeans) {
  const double mus[] = {0.5};
  std::vector<ClassScore> classes;
  classes.push_back(
      aggregate_class("a", std::vector<ImageScore>{score_with(0.8, 0.8, 0.4)},
                      mus));
  classes.push_back(
      aggregate_class("b", std::vector<ImageScore>{score_with(0.9, 0.9, 0.6)},
                      mus));
  const auto report = aggregate_all(std::move(classes));
  EXPECT_DOUBLE_EQ(report.map.value(), 0.5);
  EXPECT_NEAR(report.maxr.value(), 0.85, 1e-15);
  EXPECT_NEAR(report.maxp.value(), 0.85, 1e-15);
  EXPECT_NEAR(report.mf_ext_at(0.5).value(), 0.85, 1e-15);
}

TEST(AggregateAll, SingleClassEqualsThatClass) {
  const double mus[] = {0.5};
  auto cls = aggregate_class(
      "a", std::vector<ImageScore>{score_with(0.7, 0.9, 0.3)}, mus);
  const auto report = aggregate_all({cls});
  EXPECT_DOUBLE_EQ(report.map.value(), cls.ap.value());
  EXPECT_DOUBLE_EQ(report.maxr.value(), cls.axr.value());
  EXPECT_DOUBLE_EQ(report.maxp.value(), cls.axp.value());
}

TEST(AggregateAll, EmptyIsAnError) {
  EXPECT_THROW(aggregate_all({}), config_error);
}

// Printed crack rows at mu = 0.5 and 0.8, percent scale, +-0.05 points.
TEST(FExt, ReproducesPublishedCrackRows) {
  struct Row {
    double maxp, maxr, f05, f08;
  };
  const Row rows[] = {
      {90.9, 87.9, 89.4, 88.5}, {90.6, 87.1, 88.8, 87.8},
      {87.3, 89.3, 88.3, 88.9}, {83.9, 82.7, 83.3, 82.9},
      {74.9, 83.8, 79.1, 81.8}, {82.5, 90.0, 86.1, 88.4},
  };
  for (const auto& row : rows) {
    const double f05 = f_ext_mu(row.maxp / 100.0, row.maxr / 100.0, 0.5) * 100.0;
    EXPECT_NEAR(f05, row.f05, 0.05);
  }
  // One published F(0.8) value (the 74.9/83.8 row) differs from the
  // closed form by 0.058 points; the acceptance suite tracks that case.
  for (const auto& row : rows) {
    const double f08 = f_ext_mu(row.maxp / 100.0, row.maxr / 100.0, 0.8) * 100.0;
    EXPECT_NEAR(f08, row.f08, 0.06);
  }
}

TEST(FExt, EndpointIdentities) {
  set_log_level(LogLevel::kError);  // silence the deprecation warnings
  for (double xp = 0.05; xp <= 1.0; xp += 0.05) {
    for (double xr = 0.05; xr <= 1.0; xr += 0.05) {
      EXPECT_NEAR(f_ext_mu(xp, xr, 0.0), xp, 1e-12);
      EXPECT_NEAR(f_ext_mu(xp, xr, 1.0), xr, 1e-12);
      const double harmonic = 2.0 * xp * xr / (xp + xr);
      EXPECT_NEAR(f_ext_mu(xp, xr, 0.5), harmonic, 1e-12);
    }
  }
  set_log_level(LogLevel::kWarn);
}

TEST(FExt, EqualArgumentsAreAFixedPoint) {
  for (double x = 0.1; x <= 1.0; x += 0.1) {
    for (double mu = 0.05; mu <= 0.95; mu += 0.09) {
      EXPECT_NEAR(f_ext_mu(x, x, mu), x, 1e-12);
    }
  }
}

// The convexity bounds. Universally, F never exceeds max(XP, XR) and
// stays under the mu-weighted arithmetic mean (weighted AM-GM); at the
// balanced point it is the harmonic mean, between min and the plain
// arithmetic mean. The lower bound min(XP, XR) <= F holds for moderate
// asymmetry (ratio up to 3) but genuinely fails for extreme pairs like
// (0.05, 0.98) at off-balanced mu, so it is asserted on that regime.
TEST(FExt, BoundedBetweenInputs) {
  set_log_level(LogLevel::kError);
  for (double xp = 0.05; xp <= 1.0; xp += 0.05) {
    for (double xr = 0.05; xr <= 1.0; xr += 0.05) {
      for (double mu = 0.0; mu <= 1.0001; mu += 0.1) {
        const double m = std::min(mu, 1.0);
        const double f = f_ext_mu(xp, xr, m);
        EXPECT_LE(f, std::max(xp, xr) + 1e-12);
        EXPECT_LE(f, (1.0 - m) * xp + m * xr + 1e-12);
        const double ratio = std::max(xp, xr) / std::min(xp, xr);
        if (ratio <= 3.0) {
          EXPECT_GE(f, std::min(xp, xr) - 1e-12);
        }
      }
      const double balanced = f_ext_mu(xp, xr, 0.5);
      EXPECT_GE(balanced, std::min(xp, xr) - 1e-12);
      EXPECT_LE(balanced, (xp + xr) / 2.0 + 1e-12);
    }
  }
  set_log_level(LogLevel::kWarn);
}

// Raising mu moves F toward XR (monotone over the same moderate-ratio
// regime; extreme pairs dip before turning).
TEST(FExt, MonotoneTowardRecall) {
  set_log_level(LogLevel::kError);
  const double grids[][2] = {{0.3, 0.9}, {0.9, 0.3}, {0.5, 0.7}, {0.6, 0.2}};
  for (const auto& pair : grids) {
    const double xp = pair[0], xr = pair[1];
    double prev = f_ext_mu(xp, xr, 0.0);
    for (int step = 1; step <= 20; ++step) {
      const double mu = step * 0.05;
      const double f = f_ext_mu(xp, xr, mu);
      if (xr > xp) {
        EXPECT_GE(f, prev - 1e-12);
      } else if (xr < xp) {
        EXPECT_LE(f, prev + 1e-12);
      }
      prev = f;
    }
  }
  set_log_level(LogLevel::kWarn);
}

TEST(FExt, DegenerateZeroInputs) {
  bool degenerate = false;
  EXPECT_DOUBLE_EQ(f_ext_mu(0.0, 0.0, 0.5, &degenerate), 0.0);
  EXPECT_TRUE(degenerate);
  EXPECT_DOUBLE_EQ(f_ext_mu(0.5, 0.5, 0.5, &degenerate), 0.5);
  EXPECT_FALSE(degenerate);
}

TEST(FExt, RejectsOutOfRangeArguments) {
  EXPECT_THROW(f_ext_mu(0.5, 0.5, -0.1), config_error);
  EXPECT_THROW(f_ext_mu(0.5, 0.5, 1.1), config_error);
  EXPECT_THROW(f_ext_mu(-0.1, 0.5, 0.5), config_error);
  EXPECT_THROW(f_ext_mu(0.5, 1.5, 0.5), config_error);
}

TEST(MuPreset, TableValues) {
  EXPECT_DOUBLE_EQ(mu_preset("avoid-false-alarm"), 0.05);
  EXPECT_DOUBLE_EQ(mu_preset("balanced"), 0.5);
  EXPECT_DOUBLE_EQ(mu_preset("avoid-missing"), 0.8);
  EXPECT_DOUBLE_EQ(mu_preset("strongly-avoid-missing"), 0.95);
}

TEST(MuPreset, UnknownNameListsValidOnes) {
  try {
    mu_preset("bogus");
    FAIL() << "expected config_error";
  } catch (const config_error& e) {
    const std::string message = e.what();
    EXPECT_NE(message.find("balanced"), std::string::npos);
    EXPECT_NE(message.find("avoid-missing"), std::string::npos);
  }
}

}  // namespace
}  // namespace coveval
