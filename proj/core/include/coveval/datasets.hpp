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

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "coveval/matching.hpp"
#include "coveval/synth.hpp"

namespace coveval {

inline constexpr int kManifestSchemaVersion = 1;
inline constexpr int kSceneSchemaVersion = 1;

/// Ground-truth source formats a manifest can reference.
///   voc-xml    : one VOC annotation XML per image
///   scene-json : one synthetic scene document per image (carries its own
///                detections as well)
struct ImageRecord {
  std::string image_id;
  double width = 0.0;
  double height = 0.0;
  std::string annotation;  ///< path relative to the manifest directory
};

struct Manifest {
  int schema_version = kManifestSchemaVersion;
  std::string format;  ///< "voc-xml" or "scene-json"
  std::vector<std::string> classes;
  std::vector<ImageRecord> images;
  std::filesystem::path base_dir;  ///< directory of the manifest file

  std::filesystem::path annotation_path(const ImageRecord& record) const {
    return base_dir / record.annotation;
  }
};

/// Reads and validates a manifest: unique image ids, known format, and
/// every referenced annotation file present on disk.
Manifest read_manifest(const std::filesystem::path& path);
void write_manifest(const Manifest& manifest, const std::filesystem::path& path);

/// Parses a VOC annotation document: one GroundTruth per <object>, boxes
/// from <bndbox> xmin/ymin/xmax/ymax as reals. Malformed XML raises
/// parse_error with line context; an inverted or degenerate box raises
/// parse_error naming the object index.
std::vector<GroundTruth> parse_voc_gt(std::istream& in,
                                      const std::string& image_id,
                                      const std::string& source_name = "<xml>");

/// Parses the per-class detection text format: one detection per line,
///   <image_id> <confidence> <xmin> <ymin> <xmax> <ymax>
/// whitespace-separated with dot-decimal reals; blank lines and lines
/// starting with '#' are ignored. Every failure is a parse_error with the
/// 1-based line number; confidences outside [0, 1] are rejected.
std::vector<Detection> parse_detections(std::istream& in,
                                        const std::string& class_id,
                                        const std::string& source_name = "<det>");

/// Writes detections in the same per-class text format with full
/// round-trip precision; parse(write(dets)) reproduces every value.
void write_detections(std::span<const Detection> detections,
                      std::ostream& out);

/// Scene serialization. Round-trips are exact: numbers are written with
/// full (shortest round-trip) precision, so read(write(s)) reproduces
/// every coordinate, confidence, index and seed bit-for-bit. Documents
/// with an unknown schema_version raise format_error.
void write_scene(const SyntheticScene& scene, std::ostream& out);
SyntheticScene read_scene(std::istream& in,
                          const std::string& source_name = "<scene>");
void write_scene_file(const SyntheticScene& scene,
                      const std::filesystem::path& path);
SyntheticScene read_scene_file(const std::filesystem::path& path);

/// Consistency report over loaded inputs. All findings are warnings:
/// evaluation proceeds regardless.
struct ValidationReport {
  std::vector<std::string> unknown_image_ids;
  std::vector<std::string> unknown_classes;
  std::vector<std::string> out_of_extent;
  std::vector<std::string> duplicate_gt;

  bool empty() const {
    return unknown_image_ids.empty() && unknown_classes.empty() &&
           out_of_extent.empty() && duplicate_gt.empty();
  }
};

ValidationReport validate_inputs(const Manifest& manifest,
                                 std::span<const GroundTruth> ground_truths,
                                 std::span<const Detection> detections);

/// Everything loadable from a ground-truth source: the manifest, all
/// ground truths, and (for scene manifests) the embedded detections.
struct Dataset {
  Manifest manifest;
  std::vector<GroundTruth> ground_truths;
  std::vector<Detection> scene_detections;
  bool has_scene_detections = false;
};

/// Loads a dataset from a manifest file or a directory containing
/// manifest.json.
Dataset load_dataset(const std::filesystem::path& path);

/// Loads detections from any supported source:
///   - a directory with manifest.json            -> scene-embedded detections
///   - a directory with per-class <class>.txt    -> VOC results convention
///     (a class listed in the manifest without its file is an error)
///   - a .json file with a "detections" array    -> unified JSON format
///   - a .json manifest file (scene format)      -> scene-embedded detections
///   - a .txt file                               -> one class, named by the stem
std::vector<Detection> load_detections(const std::filesystem::path& path,
                                       const Manifest& manifest);

}  // namespace coveval
