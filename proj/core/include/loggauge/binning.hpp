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

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "loggauge/annotations.hpp"

namespace loggauge {

// Diameter category read off the bounding-box width. Ordered thin < thick.
enum class DiameterBin : std::uint8_t { kThin = 0, kMedium = 1, kThick = 2 };

inline constexpr std::size_t kNumBins = 3;

std::string_view BinName(DiameterBin bin);

// Thin is [0, thin_max), Medium is [thin_max, medium_max], Thick is
// (medium_max, inf). Widths are in original-image pixels.
struct BinThresholds {
  double thin_max = 30.0;
  double medium_max = 60.0;
};

// Throws Error(kInvalidArgument) unless 0 < thin_max <= medium_max, finite.
void Validate(const BinThresholds& t);

// Throws Error(kInvalidArgument) for negative or non-finite widths.
DiameterBin AssignBin(double width_px, const BinThresholds& t);

struct BinnedDetection {
  Detection detection;
  double width_px = 0.0;
  DiameterBin bin = DiameterBin::kThin;
};

// width_px = box.w * image width. Unknown image ids throw
// Error(kUnknownImage).
std::vector<BinnedDetection> BinDetections(std::span<const Detection> dets,
                                           const DatasetManifest& manifest,
                                           const BinThresholds& t);

using BinHistogram = std::array<std::size_t, kNumBins>;
// confusion[gt_bin][predicted_bin]
using BinConfusion = std::array<std::array<std::size_t, kNumBins>, kNumBins>;

struct BinReport {
  BinHistogram histogram{};
  BinConfusion confusion{};
  // Absent when there were no matched pairs.
  std::optional<double> bin_accuracy;
};

BinHistogram Histogram(std::span<const BinnedDetection> binned);

// Bins both sides of each true-positive pair with the same thresholds.
// `histogram` counts the detection-side bins.
BinReport BinConfusionReport(std::span<const MatchedPair> pairs,
                             const DatasetManifest& manifest,
                             const BinThresholds& t);

}  // namespace loggauge
