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

#include "loggauge/postprocess.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "loggauge/error.hpp"

namespace loggauge {

namespace {

bool InUnitRange(double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }

// Indices ordered by descending confidence; stable so ties keep input order.
std::vector<std::size_t> ConfidenceOrder(std::span<const Detection> dets) {
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return dets[a].confidence > dets[b].confidence;
                   });
  return order;
}

}  // namespace

void Validate(const PostprocessParams& params) {
  if (!InUnitRange(params.conf_threshold)) {
    throw Error(ErrorCode::kInvalidArgument,
                "conf_threshold must lie in [0, 1]");
  }
  if (!InUnitRange(params.nms_iou_threshold)) {
    throw Error(ErrorCode::kInvalidArgument,
                "nms_iou_threshold must lie in [0, 1]");
  }
}

std::vector<Detection> FilterConfidence(std::span<const Detection> dets,
                                        double threshold) {
  std::vector<Detection> out;
  std::copy_if(dets.begin(), dets.end(), std::back_inserter(out),
               [&](const Detection& d) { return d.confidence >= threshold; });
  return out;
}

std::vector<Detection> GreedyNms(std::span<const Detection> dets,
                                 const ImageDims& dims, double iou_threshold) {
  ValidateDims(dims);
  for (const Detection& d : dets) {
    if (d.image_id != dets.front().image_id) {
      throw Error(ErrorCode::kUsage, "GreedyNms: detections span images '" +
                                         dets.front().image_id + "' and '" +
                                         d.image_id + "'");
    }
  }
  std::vector<PixelBox> boxes;
  boxes.reserve(dets.size());
  for (const Detection& d : dets) boxes.push_back(NormToPixel(d.box, dims));

  std::vector<std::size_t> kept;
  for (std::size_t i : ConfidenceOrder(dets)) {
    const bool suppressed =
        std::any_of(kept.begin(), kept.end(), [&](std::size_t k) {
          return dets[k].class_id == dets[i].class_id &&
                 Iou(boxes[k], boxes[i]) > iou_threshold;
        });
    if (!suppressed) kept.push_back(i);
  }
  std::vector<Detection> out;
  out.reserve(kept.size());
  for (std::size_t k : kept) out.push_back(dets[k]);
  return out;
}

std::vector<Detection> Postprocess(std::span<const Detection> dets,
                                   const DatasetManifest& manifest,
                                   const PostprocessParams& params) {
  Validate(params);
  std::map<std::string, std::vector<Detection>> per_image;
  for (const Detection& d : FilterConfidence(dets, params.conf_threshold)) {
    per_image[d.image_id].push_back(d);
  }
  // Reject unknown ids even when every detection of that image was filtered.
  for (const Detection& d : dets) manifest.At(d.image_id);

  std::vector<Detection> out;
  for (const auto& [image_id, group] : per_image) {
    auto kept =
        GreedyNms(group, manifest.DimsOf(image_id), params.nms_iou_threshold);
    out.insert(out.end(), std::make_move_iterator(kept.begin()),
               std::make_move_iterator(kept.end()));
  }
  return out;
}

}  // namespace loggauge
