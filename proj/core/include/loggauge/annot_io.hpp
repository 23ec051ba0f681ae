// Copyright 2026 The LogGauge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "loggauge/annotations.hpp"

namespace loggauge {

enum class ParseMode { kStrict, kLenient };

// YOLO label text: one `class cx cy w h` line per instance. Blank lines are
// skipped; every other problem throws ParseError with the 1-based line.
std::vector<GroundTruth> ParseYoloGt(std::string_view content,
                                     const std::string& image_id,
                                     const std::string& source = "");

// Fixed six-decimal YOLO text. All records must share one image id.
std::string WriteYoloGt(std::span<const GroundTruth> records);

// Line-delimited JSON detections. In lenient mode unknown fields and a
// leading `#` metadata line are skipped and reported through `warnings`.
std::vector<Detection> ParseDetections(std::string_view content,
                                       ParseMode mode = ParseMode::kStrict,
                                       std::vector<std::string>* warnings =
                                           nullptr,
                                       const std::string& source = "");

// One compact JSON object per line, fields in interchange order.
std::string WriteDetections(std::span<const Detection> detections);

// COCO-style dataset: `images` plus `annotations` with pixel `bbox` and/or
// polygon `segmentation`. Image ids become the file name without extension
// (falling back to the numeric id); category ids are remapped to 0-based
// class ids in ascending order.
Dataset ParseCocoDataset(std::string_view content,
                         const std::string& source = "");

std::string WriteCocoDataset(const Dataset& dataset);

// Manifest JSON array; relative paths resolve against `base_dir`.
DatasetManifest LoadManifest(std::string_view content,
                             const std::filesystem::path& base_dir,
                             const std::string& source = "");

std::string WriteManifest(const DatasetManifest& manifest,
                          const std::filesystem::path& base_dir);

// Reads every YOLO label file referenced by the manifest.
Dataset LoadYoloDataset(DatasetManifest manifest);

// Loads either a manifest (JSON array) or a COCO dataset (JSON object with
// `images`) from disk.
Dataset LoadDatasetFile(const std::filesystem::path& path);

std::string ReadTextFile(const std::filesystem::path& path);
void WriteTextFile(const std::filesystem::path& path, std::string_view text);

}  // namespace loggauge
