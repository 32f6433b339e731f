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

#include "coveval/datasets.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <nlohmann/json.hpp>

#include "coveval/errors.hpp"
#include "coveval/log.hpp"

namespace coveval {

using json = nlohmann::json;

namespace {

std::ifstream open_for_read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw parse_error("cannot open file", path.string(), 0);
  }
  return in;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw parse_error("cannot open file for writing", path.string(), 0);
  }
  return out;
}

json parse_json_stream(std::istream& in, const std::string& source) {
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw parse_error(std::string("invalid JSON: ") + e.what(), source, 0);
  }
}

double require_number(const json& j, const char* key,
                      const std::string& source) {
  if (!j.contains(key) || !j[key].is_number()) {
    throw parse_error(std::string("missing or non-numeric field '") + key +
                          "'",
                      source, 0);
  }
  return j[key].get<double>();
}

json box_to_json(const Box& b) {
  return json::array({b.x1(), b.y1(), b.x2(), b.y2()});
}

Box box_from_json(const json& j, const std::string& source) {
  if (!j.is_array() || j.size() != 4) {
    throw parse_error("box must be an array of 4 numbers", source, 0);
  }
  try {
    return Box(j[0].get<double>(), j[1].get<double>(), j[2].get<double>(),
               j[3].get<double>());
  } catch (const invalid_box_error& e) {
    throw parse_error(e.what(), source, 0);
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Manifest

namespace {

Manifest manifest_from_json(const json& doc,
                            const std::filesystem::path& path) {
  Manifest manifest;
  manifest.base_dir = path.parent_path();
  if (!doc.contains("schema_version") ||
      !doc["schema_version"].is_number_integer()) {
    throw parse_error("manifest missing integer schema_version", path.string(),
                      0);
  }
  manifest.schema_version = doc["schema_version"].get<int>();
  if (manifest.schema_version != kManifestSchemaVersion) {
    throw format_error("unsupported manifest schema_version " +
                       std::to_string(manifest.schema_version) +
                       " (expected " + std::to_string(kManifestSchemaVersion) +
                       ") in " + path.string());
  }
  manifest.format = doc.value("format", "");
  if (manifest.format != "voc-xml" && manifest.format != "scene-json") {
    throw parse_error("manifest format must be 'voc-xml' or 'scene-json'",
                      path.string(), 0);
  }
  for (const auto& cls : doc.value("classes", json::array())) {
    manifest.classes.push_back(cls.get<std::string>());
  }

  std::unordered_set<std::string> seen_ids;
  for (const auto& image : doc.value("images", json::array())) {
    ImageRecord record;
    record.image_id = image.value("image_id", "");
    if (record.image_id.empty()) {
      throw parse_error("image record missing image_id", path.string(), 0);
    }
    if (!seen_ids.insert(record.image_id).second) {
      throw parse_error("duplicate image_id '" + record.image_id + "'",
                        path.string(), 0);
    }
    record.width = require_number(image, "width", path.string());
    record.height = require_number(image, "height", path.string());
    record.annotation = image.value("annotation", "");
    if (record.annotation.empty()) {
      throw parse_error("image record missing annotation path", path.string(),
                        0);
    }
    const auto annotation_path = manifest.base_dir / record.annotation;
    if (!std::filesystem::exists(annotation_path)) {
      throw parse_error("annotation file does not exist: " +
                            annotation_path.string(),
                        path.string(), 0);
    }
    manifest.images.push_back(std::move(record));
  }
  return manifest;
}

}  // namespace

Manifest read_manifest(const std::filesystem::path& path) {
  auto in = open_for_read(path);
  const json doc = parse_json_stream(in, path.string());
  try {
    return manifest_from_json(doc, path);
  } catch (const json::exception& e) {
    throw parse_error(std::string("manifest structure error: ") + e.what(),
                      path.string(), 0);
  }
}

void write_manifest(const Manifest& manifest,
                    const std::filesystem::path& path) {
  json doc;
  doc["schema_version"] = kManifestSchemaVersion;
  doc["format"] = manifest.format;
  doc["classes"] = manifest.classes;
  json images = json::array();
  for (const auto& record : manifest.images) {
    images.push_back({{"image_id", record.image_id},
                      {"width", record.width},
                      {"height", record.height},
                      {"annotation", record.annotation}});
  }
  doc["images"] = std::move(images);
  auto out = open_for_write(path);
  out << doc.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// VOC annotation XML

std::vector<GroundTruth> parse_voc_gt(std::istream& in,
                                      const std::string& image_id,
                                      const std::string& source_name) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    throw parse_error(std::string("malformed XML: ") + e.message(),
                      source_name, e.line());
  }

  const auto annotation = tree.get_child_optional("annotation");
  if (!annotation) {
    throw parse_error("missing <annotation> root element", source_name, 0);
  }

  std::vector<GroundTruth> result;
  std::size_t object_index = 0;
  for (const auto& [name, node] : *annotation) {
    if (name != "object") continue;
    ++object_index;
    std::string class_id;
    double xmin, ymin, xmax, ymax;
    try {
      class_id = node.get<std::string>("name");
      xmin = node.get<double>("bndbox.xmin");
      ymin = node.get<double>("bndbox.ymin");
      xmax = node.get<double>("bndbox.xmax");
      ymax = node.get<double>("bndbox.ymax");
    } catch (const pt::ptree_error& e) {
      throw parse_error("object " + std::to_string(object_index) + ": " +
                            e.what(),
                        source_name, 0);
    }
    try {
      result.push_back(
          GroundTruth{image_id, class_id, Box(xmin, ymin, xmax, ymax)});
    } catch (const invalid_box_error& e) {
      throw invalid_box_error("object " + std::to_string(object_index) +
                              " of " + source_name + ": " + e.what());
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Per-class detection text files

namespace {

double parse_real(const std::string& token, const char* what,
                  const std::string& source, std::size_t line) {
  double value = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw parse_error(std::string("non-numeric ") + what + " '" + token + "'",
                      source, line);
  }
  return value;
}

}  // namespace

std::vector<Detection> parse_detections(std::istream& in,
                                        const std::string& class_id,
                                        const std::string& source_name) {
  std::vector<Detection> result;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    std::string token;
    while (fields >> token) tokens.push_back(token);
    if (tokens.empty() || tokens.front().front() == '#') continue;
    if (tokens.size() != 6) {
      throw parse_error("expected 6 fields "
                        "(<image_id> <confidence> <xmin> <ymin> <xmax> <ymax>), "
                        "got " + std::to_string(tokens.size()),
                        source_name, line_number);
    }
    const std::string& image_id = tokens[0];
    const double confidence =
        parse_real(tokens[1], "confidence", source_name, line_number);
    if (!(confidence >= 0.0 && confidence <= 1.0)) {
      throw parse_error("confidence " + tokens[1] + " outside [0, 1]",
                        source_name, line_number);
    }
    const double xmin = parse_real(tokens[2], "coordinate", source_name, line_number);
    const double ymin = parse_real(tokens[3], "coordinate", source_name, line_number);
    const double xmax = parse_real(tokens[4], "coordinate", source_name, line_number);
    const double ymax = parse_real(tokens[5], "coordinate", source_name, line_number);
    try {
      result.push_back(Detection{image_id, class_id,
                                 Box(xmin, ymin, xmax, ymax), confidence});
    } catch (const invalid_box_error& e) {
      throw parse_error(e.what(), source_name, line_number);
    }
  }
  return result;
}

void write_detections(std::span<const Detection> detections,
                      std::ostream& out) {
  char buffer[192];
  for (const auto& det : detections) {
    std::snprintf(buffer, sizeof(buffer), " %.17g %.17g %.17g %.17g %.17g\n",
                  det.confidence, det.box.x1(), det.box.y1(), det.box.x2(),
                  det.box.y2());
    out << det.image_id << buffer;
  }
}

// ---------------------------------------------------------------------------
// Scene JSON

namespace {

const char* kind_name(TransformParams::Kind kind) {
  return kind == TransformParams::Kind::kDeterministic ? "deterministic"
                                                       : "random";
}

TransformParams::Kind kind_from_name(const std::string& name,
                                     const std::string& source) {
  if (name == "deterministic") return TransformParams::Kind::kDeterministic;
  if (name == "random") return TransformParams::Kind::kRandom;
  throw parse_error("unknown transform kind '" + name + "'", source, 0);
}

}  // namespace

void write_scene(const SyntheticScene& scene, std::ostream& out) {
  json doc;
  doc["schema_version"] = kSceneSchemaVersion;
  doc["type"] = "coveval-scene";
  doc["image_id"] = scene.image_id;
  doc["class_id"] = scene.class_id;
  doc["seed"] = scene.seed;
  doc["box_size"] = scene.box_size;
  doc["stride"] = scene.stride;
  doc["extent"] = box_to_json(scene.extent);

  doc["noise"] = {{"scale_lo", scene.noise.scale_lo},
                  {"scale_hi", scene.noise.scale_hi},
                  {"position_jitter", scene.noise.position_jitter},
                  {"duplication", scene.noise.duplication},
                  {"drop_out", scene.noise.drop_out},
                  {"false_alarms", scene.noise.false_alarms},
                  {"confidence_lo", scene.noise.confidence_lo},
                  {"confidence_hi", scene.noise.confidence_hi}};

  const TransformParams& params = scene.curve.params;
  json curve;
  curve["depth"] = scene.curve.depth;
  curve["seed"] = scene.curve.seed;
  curve["params"] = {{"kind", kind_name(params.kind)},
                     {"points_per_segment", params.points_per_segment},
                     {"t_lo", params.t_lo},
                     {"t_hi", params.t_hi},
                     {"h_lo", params.h_lo},
                     {"h_hi", params.h_hi}};
  json points = json::array();
  for (const auto& p : scene.curve.points) {
    points.push_back(json::array({p.x, p.y, p.n, p.k, p.t_order}));
  }
  curve["points"] = std::move(points);
  doc["curve"] = std::move(curve);

  json gts = json::array();
  for (const auto& gt : scene.gt_boxes) gts.push_back(box_to_json(gt.box));
  doc["ground_truth"] = std::move(gts);

  json dets = json::array();
  for (const auto& det : scene.det_boxes) {
    dets.push_back(json::array({det.box.x1(), det.box.y1(), det.box.x2(),
                                det.box.y2(), det.confidence}));
  }
  doc["detections"] = std::move(dets);

  out << doc.dump(2) << "\n";
}

namespace {

SyntheticScene scene_from_json(const json& doc, const std::string& source_name) {
  const std::string image_id = doc.value("image_id", "");
  const std::string class_id = doc.value("class_id", "");
  if (image_id.empty() || class_id.empty()) {
    throw parse_error("scene missing image_id/class_id", source_name, 0);
  }

  PolyCurve curve;
  const json& curve_doc = doc.at("curve");
  curve.depth = curve_doc.value("depth", 0);
  curve.seed = curve_doc.value("seed", std::uint64_t{0});
  const json& params_doc = curve_doc.at("params");
  curve.params.kind =
      kind_from_name(params_doc.value("kind", ""), source_name);
  curve.params.points_per_segment = params_doc.value("points_per_segment", 1);
  curve.params.t_lo = require_number(params_doc, "t_lo", source_name);
  curve.params.t_hi = require_number(params_doc, "t_hi", source_name);
  curve.params.h_lo = require_number(params_doc, "h_lo", source_name);
  curve.params.h_hi = require_number(params_doc, "h_hi", source_name);
  for (const auto& p : curve_doc.at("points")) {
    if (!p.is_array() || p.size() != 5) {
      throw parse_error("curve point must be [x, y, n, k, t_order]",
                        source_name, 0);
    }
    curve.points.push_back(IndexedPoint{
        p[0].get<double>(), p[1].get<double>(), p[2].get<int>(),
        p[3].get<std::uint64_t>(), p[4].get<double>()});
  }

  DetectorModel noise;
  const json& noise_doc = doc.at("noise");
  noise.scale_lo = require_number(noise_doc, "scale_lo", source_name);
  noise.scale_hi = require_number(noise_doc, "scale_hi", source_name);
  noise.position_jitter =
      require_number(noise_doc, "position_jitter", source_name);
  noise.duplication = noise_doc.value("duplication", 1);
  noise.drop_out = require_number(noise_doc, "drop_out", source_name);
  noise.false_alarms = noise_doc.value("false_alarms", 0);
  noise.confidence_lo = require_number(noise_doc, "confidence_lo", source_name);
  noise.confidence_hi = require_number(noise_doc, "confidence_hi", source_name);

  SyntheticScene scene{image_id,
                       class_id,
                       std::move(curve),
                       box_from_json(doc.at("extent"), source_name),
                       require_number(doc, "box_size", source_name),
                       require_number(doc, "stride", source_name),
                       noise,
                       doc.value("seed", std::uint64_t{0}),
                       {},
                       {}};

  for (const auto& g : doc.at("ground_truth")) {
    scene.gt_boxes.push_back(
        GroundTruth{image_id, class_id, box_from_json(g, source_name)});
  }
  for (const auto& d : doc.at("detections")) {
    if (!d.is_array() || d.size() != 5) {
      throw parse_error("detection must be [x1, y1, x2, y2, confidence]",
                        source_name, 0);
    }
    const double confidence = d[4].get<double>();
    if (!(confidence >= 0.0 && confidence <= 1.0)) {
      throw parse_error("detection confidence outside [0, 1]", source_name, 0);
    }
    scene.det_boxes.push_back(Detection{
        image_id, class_id,
        Box(d[0].get<double>(), d[1].get<double>(), d[2].get<double>(),
            d[3].get<double>()),
        confidence});
  }
  return scene;
}

}  // namespace

SyntheticScene read_scene(std::istream& in, const std::string& source_name) {
  const json doc = parse_json_stream(in, source_name);
  if (!doc.contains("schema_version") ||
      !doc["schema_version"].is_number_integer()) {
    throw parse_error("scene missing integer schema_version", source_name, 0);
  }
  const int version = doc["schema_version"].get<int>();
  if (version != kSceneSchemaVersion) {
    throw format_error("unsupported scene schema_version " +
                       std::to_string(version) + " (expected " +
                       std::to_string(kSceneSchemaVersion) + ") in " +
                       source_name);
  }
  try {
    return scene_from_json(doc, source_name);
  } catch (const invalid_box_error& e) {
    throw parse_error(e.what(), source_name, 0);
  } catch (const json::exception& e) {
    throw parse_error(std::string("scene structure error: ") + e.what(),
                      source_name, 0);
  }
}

void write_scene_file(const SyntheticScene& scene,
                      const std::filesystem::path& path) {
  auto out = open_for_write(path);
  write_scene(scene, out);
}

SyntheticScene read_scene_file(const std::filesystem::path& path) {
  auto in = open_for_read(path);
  return read_scene(in, path.string());
}

// ---------------------------------------------------------------------------
// Validation

ValidationReport validate_inputs(const Manifest& manifest,
                                 std::span<const GroundTruth> ground_truths,
                                 std::span<const Detection> detections) {
  ValidationReport report;

  std::unordered_map<std::string, const ImageRecord*> images;
  for (const auto& record : manifest.images) {
    images[record.image_id] = &record;
  }
  const std::set<std::string> classes(manifest.classes.begin(),
                                      manifest.classes.end());

  auto check_extent = [&](const std::string& image_id, const Box& box,
                          const char* what) {
    const auto it = images.find(image_id);
    if (it == images.end()) return;
    const ImageRecord& record = *it->second;
    if (box.x1() < 0.0 || box.y1() < 0.0 || box.x2() > record.width ||
        box.y2() > record.height) {
      report.out_of_extent.push_back(std::string(what) + " box on image '" +
                                     image_id + "' exceeds its " +
                                     "extent");
    }
  };

  std::set<std::tuple<std::string, std::string, double, double, double, double>>
      gt_seen;
  for (const auto& gt : ground_truths) {
    check_extent(gt.image_id, gt.box, "ground-truth");
    const auto key = std::make_tuple(gt.image_id, gt.class_id, gt.box.x1(),
                                     gt.box.y1(), gt.box.x2(), gt.box.y2());
    if (!gt_seen.insert(key).second) {
      report.duplicate_gt.push_back("duplicate ground-truth box on image '" +
                                    gt.image_id + "' class '" + gt.class_id +
                                    "'");
    }
  }

  std::set<std::string> unknown_images, unknown_classes;
  for (const auto& det : detections) {
    if (images.find(det.image_id) == images.end()) {
      unknown_images.insert(det.image_id);
    }
    if (classes.find(det.class_id) == classes.end()) {
      unknown_classes.insert(det.class_id);
    }
    check_extent(det.image_id, det.box, "detection");
  }
  report.unknown_image_ids.assign(unknown_images.begin(), unknown_images.end());
  report.unknown_classes.assign(unknown_classes.begin(), unknown_classes.end());
  return report;
}

// ---------------------------------------------------------------------------
// Loaders

Dataset load_dataset(const std::filesystem::path& path) {
  std::filesystem::path manifest_path = path;
  if (std::filesystem::is_directory(path)) {
    manifest_path = path / "manifest.json";
  }
  Dataset dataset;
  dataset.manifest = read_manifest(manifest_path);

  for (const auto& record : dataset.manifest.images) {
    const auto annotation_path = dataset.manifest.annotation_path(record);
    if (dataset.manifest.format == "scene-json") {
      SyntheticScene scene = read_scene_file(annotation_path);
      dataset.ground_truths.insert(dataset.ground_truths.end(),
                                   scene.gt_boxes.begin(),
                                   scene.gt_boxes.end());
      dataset.scene_detections.insert(dataset.scene_detections.end(),
                                      scene.det_boxes.begin(),
                                      scene.det_boxes.end());
      dataset.has_scene_detections = true;
    } else {
      auto in = open_for_read(annotation_path);
      auto gts =
          parse_voc_gt(in, record.image_id, annotation_path.string());
      dataset.ground_truths.insert(dataset.ground_truths.end(), gts.begin(),
                                   gts.end());
    }
  }
  return dataset;
}

std::vector<Detection> load_detections(const std::filesystem::path& path,
                                       const Manifest& manifest) {
  if (std::filesystem::is_directory(path)) {
    if (std::filesystem::exists(path / "manifest.json")) {
      return load_dataset(path).scene_detections;
    }
    // VOC results convention: one <class>.txt per manifest class.
    std::vector<Detection> result;
    for (const auto& cls : manifest.classes) {
      const auto file = path / (cls + ".txt");
      if (!std::filesystem::exists(file)) {
        throw parse_error("missing detection file for class '" + cls + "'",
                          file.string(), 0);
      }
      auto in = open_for_read(file);
      auto dets = parse_detections(in, cls, file.string());
      result.insert(result.end(), dets.begin(), dets.end());
    }
    return result;
  }

  const auto extension = path.extension().string();
  if (extension == ".txt") {
    auto in = open_for_read(path);
    return parse_detections(in, path.stem().string(), path.string());
  }
  if (extension == ".json") {
    auto in = open_for_read(path);
    const json doc = parse_json_stream(in, path.string());
    if (doc.contains("images") && doc.contains("format")) {
      return load_dataset(path).scene_detections;
    }
    if (!doc.contains("detections") || !doc["detections"].is_array()) {
      throw parse_error("expected a 'detections' array or a scene manifest",
                        path.string(), 0);
    }
    std::vector<Detection> result;
    try {
      for (const auto& d : doc["detections"]) {
        const double confidence =
            require_number(d, "confidence", path.string());
        if (!(confidence >= 0.0 && confidence <= 1.0)) {
          throw parse_error("detection confidence outside [0, 1]",
                            path.string(), 0);
        }
        result.push_back(Detection{d.value("image_id", ""),
                                   d.value("class_id", ""),
                                   box_from_json(d.at("box"), path.string()),
                                   confidence});
      }
    } catch (const json::exception& e) {
      throw parse_error(std::string("detection structure error: ") + e.what(),
                        path.string(), 0);
    }
    return result;
  }
  throw parse_error("unsupported detection source (want a directory, .txt or "
                    ".json)",
                    path.string(), 0);
}

}  // namespace coveval
