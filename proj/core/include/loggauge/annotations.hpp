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

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "loggauge/geometry.hpp"

namespace loggauge {

// One annotated log instance. Single-class datasets use 0 = log.
struct GroundTruth {
  std::string image_id;
  int class_id = 0;
  NormBox box;

  friend bool operator==(const GroundTruth&, const GroundTruth&) = default;
};

// One detector output bound to an image.
struct Detection {
  std::string image_id;
  int class_id = 0;
  NormBox box;
  double confidence = 0.0;

  friend bool operator==(const Detection&, const Detection&) = default;
};

// A true-positive match produced by the evaluator.
struct MatchedPair {
  GroundTruth ground_truth;
  Detection detection;
  double iou = 0.0;
};

struct ManifestEntry {
  std::string image_id;
  ImageDims dims;
  std::filesystem::path gt_path;
  std::optional<std::filesystem::path> image_path;
};

// Image index: binds image ids to pixel dimensions and label files.
// Entries keep their load order; ids are unique.
class DatasetManifest {
 public:
  DatasetManifest() = default;
  // Throws Error(kSchema) on duplicate ids or invalid dims.
  explicit DatasetManifest(std::vector<ManifestEntry> entries);

  const std::vector<ManifestEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  std::optional<std::size_t> IndexOf(const std::string& image_id) const;
  // Throws Error(kUnknownImage) naming the id.
  const ManifestEntry& At(const std::string& image_id) const;
  const ImageDims& DimsOf(const std::string& image_id) const {
    return At(image_id).dims;
  }

 private:
  std::vector<ManifestEntry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Ground truth grouped per image; `ground_truth[i]` belongs to
// `manifest.entries()[i]`.
struct Dataset {
  DatasetManifest manifest;
  std::vector<std::vector<GroundTruth>> ground_truth;

  std::size_t num_instances() const;
};

}  // namespace loggauge
