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

#include "loggauge/binning.hpp"

#include <cmath>
#include <string>

#include "loggauge/error.hpp"

namespace loggauge {

std::string_view BinName(DiameterBin bin) {
  switch (bin) {
    case DiameterBin::kThin:
      return "thin";
    case DiameterBin::kMedium:
      return "medium";
    case DiameterBin::kThick:
      return "thick";
  }
  return "?";
}

void Validate(const BinThresholds& t) {
  if (!std::isfinite(t.thin_max) || !std::isfinite(t.medium_max) ||
      !(t.thin_max > 0.0) || !(t.thin_max <= t.medium_max)) {
    throw Error(ErrorCode::kInvalidArgument,
                "bin thresholds need 0 < thin_max <= medium_max, got " +
                    std::to_string(t.thin_max) + "," +
                    std::to_string(t.medium_max));
  }
}

DiameterBin AssignBin(double width_px, const BinThresholds& t) {
  if (!std::isfinite(width_px) || width_px < 0.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "width must be finite and non-negative");
  }
  if (width_px < t.thin_max) return DiameterBin::kThin;
  if (width_px <= t.medium_max) return DiameterBin::kMedium;
  return DiameterBin::kThick;
}

std::vector<BinnedDetection> BinDetections(std::span<const Detection> dets,
                                           const DatasetManifest& manifest,
                                           const BinThresholds& t) {
  Validate(t);
  std::vector<BinnedDetection> out;
  out.reserve(dets.size());
  for (const Detection& d : dets) {
    const double width = d.box.w * manifest.DimsOf(d.image_id).width;
    out.push_back({d, width, AssignBin(width, t)});
  }
  return out;
}

BinHistogram Histogram(std::span<const BinnedDetection> binned) {
  BinHistogram h{};
  for (const BinnedDetection& b : binned) ++h[static_cast<std::size_t>(b.bin)];
  return h;
}

BinReport BinConfusionReport(std::span<const MatchedPair> pairs,
                             const DatasetManifest& manifest,
                             const BinThresholds& t) {
  Validate(t);
  BinReport report;
  for (const MatchedPair& p : pairs) {
    const int width = manifest.DimsOf(p.ground_truth.image_id).width;
    const auto row = static_cast<std::size_t>(
        AssignBin(p.ground_truth.box.w * width, t));
    const auto col =
        static_cast<std::size_t>(AssignBin(p.detection.box.w * width, t));
    ++report.confusion[row][col];
    ++report.histogram[col];
  }
  if (!pairs.empty()) {
    std::size_t diagonal = 0;
    for (std::size_t i = 0; i < kNumBins; ++i) diagonal += report.confusion[i][i];
    report.bin_accuracy =
        static_cast<double>(diagonal) / static_cast<double>(pairs.size());
  }
  return report;
}

}  // namespace loggauge
