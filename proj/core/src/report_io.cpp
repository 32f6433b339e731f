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

#include "coveval/report_io.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "coveval/errors.hpp"

namespace coveval {

using json = nlohmann::json;

namespace {

std::string format_mu(double mu) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%g", mu);
  return buffer;
}

json optional_to_json(const std::optional<double>& value) {
  if (value) return *value;
  return nullptr;
}

std::optional<double> optional_from_json(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

json mu_table_to_json(
    const std::vector<std::pair<double, std::optional<double>>>& table) {
  json out = json::object();
  for (const auto& [mu, value] : table) {
    out[format_mu(mu)] = optional_to_json(value);
  }
  return out;
}

std::vector<std::pair<double, std::optional<double>>> mu_table_from_json(
    const json& j, std::span<const double> mu_list) {
  std::vector<std::pair<double, std::optional<double>>> table;
  for (const double mu : mu_list) {
    const std::string key = format_mu(mu);
    if (j.contains(key)) {
      table.emplace_back(mu, optional_from_json(j[key]));
    } else {
      table.emplace_back(mu, std::nullopt);
    }
  }
  return table;
}

/// Percent with one decimal, or "n/a".
std::string percent(const std::optional<double>& value) {
  if (!value) return "n/a";
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.1f", *value * 100.0);
  return buffer;
}

}  // namespace

std::string report_to_json(const EvalReport& report) {
  json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["tool"] = "coveval";
  doc["config"] = {{"standard", report.standard},
                   {"overlap_threshold", report.overlap_threshold},
                   {"confidence_threshold", report.confidence_threshold},
                   {"mu_list", report.mu_list},
                   {"threads", report.threads},
                   {"seed", report.seed},
                   {"gt_path", report.gt_path},
                   {"det_path", report.det_path}};

  json classes = json::array();
  for (const auto& cls : report.per_class) {
    classes.push_back({{"class_id", cls.class_id},
                       {"ap", optional_to_json(cls.ap)},
                       {"axr", optional_to_json(cls.axr)},
                       {"axp", optional_to_json(cls.axp)},
                       {"f_ext", mu_table_to_json(cls.f_ext)}});
  }
  doc["classes"] = std::move(classes);

  doc["overall"] = {{"map", optional_to_json(report.map)},
                    {"maxr", optional_to_json(report.maxr)},
                    {"maxp", optional_to_json(report.maxp)},
                    {"mf_ext", mu_table_to_json(report.mf_ext)}};

  json images = json::array();
  for (const auto& score : report.images) {
    images.push_back({{"image_id", score.image_id},
                      {"class_id", score.class_id},
                      {"xp", optional_to_json(score.xp)},
                      {"xr", optional_to_json(score.xr)},
                      {"p_map", optional_to_json(score.p_map)},
                      {"n_gts", score.n_gts},
                      {"n_dets", score.n_dets},
                      {"n_dets_scored", score.n_dets_scored},
                      {"k_p", score.k_p},
                      {"k_r", score.k_r}});
  }
  doc["images"] = std::move(images);
  return doc.dump(2) + "\n";
}

EvalReport report_from_json(std::istream& in, const std::string& source_name) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw parse_error(std::string("invalid JSON: ") + e.what(), source_name,
                      0);
  }
  if (!doc.contains("schema_version") ||
      !doc["schema_version"].is_number_integer()) {
    throw parse_error("report missing integer schema_version", source_name, 0);
  }
  const int version = doc["schema_version"].get<int>();
  if (version != kReportSchemaVersion) {
    throw format_error("unsupported report schema_version " +
                       std::to_string(version) + " (expected " +
                       std::to_string(kReportSchemaVersion) + ") in " +
                       source_name);
  }

  EvalReport report;
  try {
    const json& config = doc.at("config");
    report.standard = config.value("standard", "both");
    report.overlap_threshold = config.value("overlap_threshold", 0.0);
    report.confidence_threshold = config.value("confidence_threshold", 0.0);
    report.mu_list = config.value("mu_list", std::vector<double>{});
    report.threads = config.value("threads", 1);
    report.seed = config.value("seed", std::uint64_t{0});
    report.gt_path = config.value("gt_path", "");
    report.det_path = config.value("det_path", "");

    for (const auto& c : doc.at("classes")) {
      ClassScore cls;
      cls.class_id = c.value("class_id", "");
      cls.ap = optional_from_json(c.at("ap"));
      cls.axr = optional_from_json(c.at("axr"));
      cls.axp = optional_from_json(c.at("axp"));
      cls.f_ext = mu_table_from_json(c.at("f_ext"), report.mu_list);
      report.per_class.push_back(std::move(cls));
    }

    const json& overall = doc.at("overall");
    report.map = optional_from_json(overall.at("map"));
    report.maxr = optional_from_json(overall.at("maxr"));
    report.maxp = optional_from_json(overall.at("maxp"));
    report.mf_ext = mu_table_from_json(overall.at("mf_ext"), report.mu_list);

    for (const auto& i : doc.value("images", json::array())) {
      ImageScore score;
      score.image_id = i.value("image_id", "");
      score.class_id = i.value("class_id", "");
      score.xp = optional_from_json(i.at("xp"));
      score.xr = optional_from_json(i.at("xr"));
      score.p_map = optional_from_json(i.at("p_map"));
      score.n_gts = i.value("n_gts", std::size_t{0});
      score.n_dets = i.value("n_dets", std::size_t{0});
      score.n_dets_scored = i.value("n_dets_scored", std::size_t{0});
      score.k_p = i.value("k_p", std::size_t{0});
      score.k_r = i.value("k_r", std::size_t{0});
      report.images.push_back(std::move(score));
    }
  } catch (const json::exception& e) {
    throw parse_error(std::string("report structure error: ") + e.what(),
                      source_name, 0);
  }
  return report;
}

std::string render_report_table(const EvalReport& report) {
  std::ostringstream out;
  const bool map = report.standard != "coveval";
  const bool cov = report.standard != "map";

  out << "class";
  if (map) out << "\tAP";
  if (cov) {
    out << "\tAXR\tAXP";
    for (const double mu : report.mu_list) {
      out << "\tF(" << format_mu(mu) << ")";
    }
  }
  out << "\n";

  auto row = [&](const std::string& name, const std::optional<double>& ap,
                 const std::optional<double>& axr,
                 const std::optional<double>& axp,
                 const std::vector<std::pair<double, std::optional<double>>>&
                     f_table) {
    out << name;
    if (map) out << "\t" << percent(ap);
    if (cov) {
      out << "\t" << percent(axr) << "\t" << percent(axp);
      for (const auto& [mu, value] : f_table) {
        out << "\t" << percent(value);
      }
    }
    out << "\n";
  };

  for (const auto& cls : report.per_class) {
    row(cls.class_id, cls.ap, cls.axr, cls.axp, cls.f_ext);
  }
  row("mean", report.map, report.maxr, report.maxp, report.mf_ext);
  return out.str();
}

std::string render_report_csv(const EvalReport& report) {
  std::ostringstream out;
  out << "class,metric,value\n";
  auto emit = [&](const std::string& cls, const std::string& metric,
                  const std::optional<double>& value) {
    out << cls << "," << metric << ",";
    if (value) {
      char buffer[64];
      std::snprintf(buffer, sizeof(buffer), "%.17g", *value);
      out << buffer;
    }
    out << "\n";
  };
  const bool map = report.standard != "coveval";
  const bool cov = report.standard != "map";
  for (const auto& cls : report.per_class) {
    if (map) emit(cls.class_id, "ap", cls.ap);
    if (cov) {
      emit(cls.class_id, "axr", cls.axr);
      emit(cls.class_id, "axp", cls.axp);
      for (const auto& [mu, value] : cls.f_ext) {
        emit(cls.class_id, "f_ext(" + format_mu(mu) + ")", value);
      }
    }
  }
  if (map) emit("mean", "map", report.map);
  if (cov) {
    emit("mean", "maxr", report.maxr);
    emit("mean", "maxp", report.maxp);
    for (const auto& [mu, value] : report.mf_ext) {
      emit("mean", "mf_ext(" + format_mu(mu) + ")", value);
    }
  }
  return out.str();
}

std::string render_compare_csv(const EvalReport& report, double rank_mu) {
  if (report.standard != "both") {
    throw config_error(
        "standard comparison needs a report computed with --standard both");
  }

  struct Row {
    std::string class_id;
    std::optional<double> ap;
    std::optional<double> f_ext;
  };
  std::vector<Row> rows;
  for (const auto& cls : report.per_class) {
    rows.push_back(Row{cls.class_id, cls.ap, cls.f_ext_at(rank_mu)});
  }

  // Rank 1 = best score; undefined scores rank last; ties resolve by
  // class name so the output is deterministic.
  auto ranks_by = [&](std::optional<double> Row::*field) {
    std::vector<std::size_t> order(rows.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const auto& va = rows[a].*field;
      const auto& vb = rows[b].*field;
      if (va.has_value() != vb.has_value()) return va.has_value();
      if (va && vb && *va != *vb) return *va > *vb;
      return rows[a].class_id < rows[b].class_id;
    });
    std::vector<std::size_t> rank(rows.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
      rank[order[pos]] = pos + 1;
    }
    return rank;
  };

  const auto map_rank = ranks_by(&Row::ap);
  const auto cov_rank = ranks_by(&Row::f_ext);

  std::ostringstream out;
  out << "class,ap,f_ext(" << format_mu(rank_mu)
      << "),rank_map,rank_coveval,rank_delta\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    char ap_buffer[64] = "";
    char f_buffer[64] = "";
    if (rows[i].ap) {
      std::snprintf(ap_buffer, sizeof(ap_buffer), "%.17g", *rows[i].ap);
    }
    if (rows[i].f_ext) {
      std::snprintf(f_buffer, sizeof(f_buffer), "%.17g", *rows[i].f_ext);
    }
    const auto delta = static_cast<long long>(map_rank[i]) -
                       static_cast<long long>(cov_rank[i]);
    out << rows[i].class_id << "," << ap_buffer << "," << f_buffer << ","
        << map_rank[i] << "," << cov_rank[i] << "," << delta << "\n";
  }
  return out.str();
}

}  // namespace coveval
