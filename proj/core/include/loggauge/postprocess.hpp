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

#include <span>
#include <vector>

#include "loggauge/annotations.hpp"

namespace loggauge {

struct PostprocessParams {
  double conf_threshold = 0.25;
  double nms_iou_threshold = 0.45;
};

// Throws Error(kInvalidArgument) unless both thresholds are finite and in
// [0, 1].
void Validate(const PostprocessParams& params);

// Detections with confidence >= threshold, input order preserved.
std::vector<Detection> FilterConfidence(std::span<const Detection> dets,
                                        double threshold);

// Greedy per-class NMS over detections of a single image. Candidates are
// visited by descending confidence, ties by input index; a candidate is kept
// when its IoU with every kept same-class box is <= iou_threshold. The result
// is in visit order.
std::vector<Detection> GreedyNms(std::span<const Detection> dets,
                                 const ImageDims& dims, double iou_threshold);

// Confidence filter then NMS for every image. Output is grouped by image id
// (lexicographic), each group in descending confidence. Unknown image ids
// throw Error(kUnknownImage).
std::vector<Detection> Postprocess(std::span<const Detection> dets,
                                   const DatasetManifest& manifest,
                                   const PostprocessParams& params);

}  // namespace loggauge
