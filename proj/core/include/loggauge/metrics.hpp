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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "loggauge/annotations.hpp"
#include "loggauge/binning.hpp"
#include "loggauge/postprocess.hpp"

namespace loggauge {

// The ten IoU thresholds 0.50, 0.55, ..., 0.95 averaged by mAP@0.5:0.95.
inline constexpr std::size_t kNumIouThresholds = 10;
std::array<double, kNumIouThresholds> IouThresholdSweep();

// Per-detection outcome, kept so the pooled sweep can apply its tie order.
struct DetectionVerdict {
  std::size_t detection_index = 0;  // index into the image's detection list
  double confidence = 0.0;
  bool true_positive = false;
};

struct MatchSet {
  std::string image_id;
  double iou_threshold = 0.5;
  std::vector<MatchedPair> pairs;
  std::vector<Detection> false_positives;
  std::vector<GroundTruth> false_negatives;
  std::vector<DetectionVerdict> verdicts;  // input order

  std::size_t num_ground_truth() const {
    return pairs.size() + false_negatives.size();
  }
  std::size_t num_detections() const {
    return pairs.size() + false_positives.size();
  }
};

// Greedy matching for one image. Detections are visited by descending
// confidence (ties by input index); each takes the unmatched same-class
// ground truth of highest IoU, ties to the lower ground-truth index, provided
// the IoU reaches `iou_threshold`.
MatchSet MatchImage(std::span<const GroundTruth> gt,
                    std::span<const Detection> dets, const ImageDims& dims,
                    double iou_threshold);

struct PRPoint {
  double confidence = 0.0;
  std::size_t cum_tp = 0;
  std::size_t cum_fp = 0;
  double precision = 0.0;
  double recall = 0.0;
};

// Pools every detection verdict, orders by descending confidence then image
// id then input index, and emits one point per detection. Throws
// Error(kEmptyInput) when the sets hold no ground truth.
std::vector<PRPoint> PrSweep(std::span<const MatchSet> sets);

enum class ApMode {
  kInterp101,  // mean envelope precision at recall 0.00, 0.01, ..., 1.00
  kAllPoint,   // area under the envelope at every recall step
};

std::string_view ApModeName(ApMode mode);
std::optional<ApMode> ParseApMode(std::string_view name);

double AveragePrecision(std::span<const PRPoint> curve,
                        ApMode mode = ApMode::kInterp101);

struct F1Point {
  double confidence = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Point of maximal F1, ties toward higher confidence. Throws on an empty
// curve.
F1Point MaxF1Point(std::span<const PRPoint> curve);

struct EvalOptions {
  PostprocessParams params;
  bool apply_postprocess = false;
  BinThresholds bin_thresholds;
  double iou_main = 0.5;
  ApMode ap_mode = ApMode::kInterp101;
  unsigned workers = 1;
  bool per_iou_summary = false;
};

struct IouSummary {
  double iou_threshold = 0.0;
  double ap = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::optional<double> confidence;
};

struct EvalCounts {
  std::size_t images = 0;
  std::size_t gt = 0;
  std::size_t detections = 0;
};

struct EvalReport {
  double precision = 0.0;
  // True when nothing was detected; precision is then reported as 0.
  bool precision_undefined = false;
  double recall = 0.0;
  double f1 = 0.0;
  std::optional<double> conf_at_max_f1;
  // (threshold, AP) in ascending threshold order.
  std::vector<std::pair<double, double>> ap_per_iou;
  double ap_iou_main = 0.0;
  double map50 = 0.0;
  double map5095 = 0.0;
  BinReport bin_report;
  PostprocessParams params;
  bool postprocess_applied = false;
  double iou_main = 0.5;
  ApMode ap_mode = ApMode::kInterp101;
  BinThresholds bin_thresholds;
  EvalCounts counts;
  std::vector<IouSummary> per_iou;  // filled when options.per_iou_summary
};

// Full evaluation. Detections must reference manifest images
// (Error(kUnknownImage) otherwise); a corpus without ground truth throws
// Error(kEmptyInput). Results do not depend on options.workers.
EvalReport Evaluate(const Dataset& dataset, std::span<const Detection> dets,
                    const EvalOptions& options = {});

}  // namespace loggauge
