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

#include "loggauge/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <thread>
#include <tuple>
#include <utility>

#include "loggauge/error.hpp"

namespace loggauge {

namespace {

constexpr std::size_t kNoMatch = std::numeric_limits<std::size_t>::max();

std::vector<std::size_t> ConfidenceOrder(std::span<const Detection> dets) {
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return dets[a].confidence > dets[b].confidence;
                   });
  return order;
}

// Geometry shared by every threshold for one image: detection visit order
// and the detection-major IoU matrix.
struct ImageGeometry {
  std::vector<std::size_t> order;
  std::vector<double> iou;
  std::size_t num_gt = 0;

  double At(std::size_t det, std::size_t gt) const {
    return iou[det * num_gt + gt];
  }
};

ImageGeometry PrepareImage(std::span<const GroundTruth> gt,
                           std::span<const Detection> dets,
                           const ImageDims& dims) {
  ImageGeometry geo;
  geo.order = ConfidenceOrder(dets);
  geo.num_gt = gt.size();
  std::vector<PixelBox> gt_boxes;
  gt_boxes.reserve(gt.size());
  for (const GroundTruth& g : gt) gt_boxes.push_back(NormToPixel(g.box, dims));
  geo.iou.assign(dets.size() * gt.size(), 0.0);
  for (std::size_t d = 0; d < dets.size(); ++d) {
    const PixelBox det_box = NormToPixel(dets[d].box, dims);
    for (std::size_t g = 0; g < gt.size(); ++g) {
      if (dets[d].class_id == gt[g].class_id) {
        geo.iou[d * gt.size() + g] = Iou(det_box, gt_boxes[g]);
      }
    }
  }
  return geo;
}

// For each detection (input index) the matched ground-truth index or
// kNoMatch.
std::vector<std::size_t> GreedyAssign(std::span<const GroundTruth> gt,
                                      std::span<const Detection> dets,
                                      const ImageGeometry& geo,
                                      double threshold) {
  std::vector<std::size_t> match(dets.size(), kNoMatch);
  std::vector<bool> taken(gt.size(), false);
  for (std::size_t d : geo.order) {
    std::size_t best = kNoMatch;
    double best_iou = -1.0;
    for (std::size_t g = 0; g < gt.size(); ++g) {
      if (taken[g] || gt[g].class_id != dets[d].class_id) continue;
      const double v = geo.At(d, g);
      if (v >= threshold && v > best_iou) {
        best = g;
        best_iou = v;
      }
    }
    if (best != kNoMatch) {
      taken[best] = true;
      match[d] = best;
    }
  }
  return match;
}

MatchSet BuildMatchSet(std::span<const GroundTruth> gt,
                       std::span<const Detection> dets,
                       const ImageGeometry& geo,
                       const std::vector<std::size_t>& match,
                       const std::string& image_id, double threshold) {
  MatchSet set;
  set.image_id = image_id;
  set.iou_threshold = threshold;
  std::vector<bool> gt_used(gt.size(), false);
  for (std::size_t d : geo.order) {
    if (match[d] == kNoMatch) {
      set.false_positives.push_back(dets[d]);
    } else {
      gt_used[match[d]] = true;
      set.pairs.push_back({gt[match[d]], dets[d], geo.At(d, match[d])});
    }
  }
  for (std::size_t g = 0; g < gt.size(); ++g) {
    if (!gt_used[g]) set.false_negatives.push_back(gt[g]);
  }
  set.verdicts.reserve(dets.size());
  for (std::size_t d = 0; d < dets.size(); ++d) {
    set.verdicts.push_back({d, dets[d].confidence, match[d] != kNoMatch});
  }
  return set;
}

void ValidateThreshold(double t, const char* what) {
  if (!std::isfinite(t) || t <= 0.0 || t > 1.0) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + " must lie in (0, 1]");
  }
}

double F1(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

// Largest precision at or after each curve position.
std::vector<double> PrecisionEnvelope(std::span<const PRPoint> curve) {
  std::vector<double> env(curve.size());
  double running = 0.0;
  for (std::size_t i = curve.size(); i-- > 0;) {
    running = std::max(running, curve[i].precision);
    env[i] = running;
  }
  return env;
}

// Runs fn(i) for i in [0, n) across up to `workers` threads. Each index is
// handled by exactly one thread, so writes to per-index slots need no locks.
template <typename Fn>
void ParallelFor(std::size_t n, unsigned workers, Fn&& fn) {
  const std::size_t threads =
      std::min<std::size_t>(std::max(1u, workers), std::max<std::size_t>(n, 1));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < n; i += threads) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

std::array<double, kNumIouThresholds> IouThresholdSweep() {
  std::array<double, kNumIouThresholds> out{};
  for (std::size_t k = 0; k < kNumIouThresholds; ++k) {
    out[k] = static_cast<double>(50 + 5 * k) / 100.0;
  }
  return out;
}

MatchSet MatchImage(std::span<const GroundTruth> gt,
                    std::span<const Detection> dets, const ImageDims& dims,
                    double iou_threshold) {
  ValidateDims(dims);
  ValidateThreshold(iou_threshold, "iou_threshold");
  const ImageGeometry geo = PrepareImage(gt, dets, dims);
  const auto match = GreedyAssign(gt, dets, geo, iou_threshold);
  std::string image_id;
  if (!gt.empty()) {
    image_id = gt.front().image_id;
  } else if (!dets.empty()) {
    image_id = dets.front().image_id;
  }
  return BuildMatchSet(gt, dets, geo, match, image_id, iou_threshold);
}

std::vector<PRPoint> PrSweep(std::span<const MatchSet> sets) {
  std::size_t num_gt = 0;
  for (const MatchSet& s : sets) num_gt += s.num_ground_truth();
  if (num_gt == 0) {
    throw Error(ErrorCode::kEmptyInput,
                "recall is undefined without ground truth");
  }
  struct Pooled {
    const std::string* image_id;
    const DetectionVerdict* verdict;
  };
  std::vector<Pooled> pooled;
  for (const MatchSet& s : sets) {
    for (const DetectionVerdict& v : s.verdicts) pooled.push_back({&s.image_id, &v});
  }
  std::sort(pooled.begin(), pooled.end(), [](const Pooled& a, const Pooled& b) {
    if (a.verdict->confidence != b.verdict->confidence) {
      return a.verdict->confidence > b.verdict->confidence;
    }
    if (*a.image_id != *b.image_id) return *a.image_id < *b.image_id;
    return a.verdict->detection_index < b.verdict->detection_index;
  });

  std::vector<PRPoint> curve;
  curve.reserve(pooled.size());
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (const Pooled& p : pooled) {
    (p.verdict->true_positive ? tp : fp) += 1;
    curve.push_back({p.verdict->confidence, tp, fp,
                     static_cast<double>(tp) / static_cast<double>(tp + fp),
                     static_cast<double>(tp) / static_cast<double>(num_gt)});
  }
  return curve;
}

std::string_view ApModeName(ApMode mode) {
  return mode == ApMode::kInterp101 ? "interp101" : "all-point";
}

std::optional<ApMode> ParseApMode(std::string_view name) {
  if (name == "interp101" || name == "101") return ApMode::kInterp101;
  if (name == "all-point" || name == "allpoint") return ApMode::kAllPoint;
  return std::nullopt;
}

double AveragePrecision(std::span<const PRPoint> curve, ApMode mode) {
  if (curve.empty()) return 0.0;
  const std::vector<double> env = PrecisionEnvelope(curve);
  double ap = 0.0;
  if (mode == ApMode::kInterp101) {
    std::size_t pos = 0;
    for (int k = 0; k <= 100; ++k) {
      const double r = static_cast<double>(k) / 100.0;
      while (pos < curve.size() && curve[pos].recall < r) ++pos;
      if (pos == curve.size()) break;
      ap += env[pos];
    }
    return ap / 101.0;
  }
  double prev_recall = 0.0;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (curve[i].recall > prev_recall) {
      ap += (curve[i].recall - prev_recall) * env[i];
      prev_recall = curve[i].recall;
    }
  }
  return ap;
}

F1Point MaxF1Point(std::span<const PRPoint> curve) {
  if (curve.empty()) {
    throw Error(ErrorCode::kEmptyInput, "MaxF1Point: empty curve");
  }
  F1Point best{curve[0].confidence, curve[0].precision, curve[0].recall,
               F1(curve[0].precision, curve[0].recall)};
  for (const PRPoint& p : curve.subspan(1)) {
    const double f = F1(p.precision, p.recall);
    // The curve runs in descending confidence, so a strict comparison keeps
    // the higher-confidence point on ties.
    if (f > best.f1) {
      best = {p.confidence, p.precision, p.recall, f};
    }
  }
  return best;
}

EvalReport Evaluate(const Dataset& dataset, std::span<const Detection> dets,
                    const EvalOptions& options) {
  Validate(options.params);
  Validate(options.bin_thresholds);
  ValidateThreshold(options.iou_main, "iou_main");

  const DatasetManifest& manifest = dataset.manifest;
  const std::size_t num_images = manifest.size();
  if (dataset.ground_truth.size() != num_images) {
    throw Error(ErrorCode::kInvalidArgument,
                "dataset ground truth does not line up with its manifest");
  }
  const std::size_t num_gt = dataset.num_instances();
  if (num_gt == 0) {
    throw Error(ErrorCode::kEmptyInput, "ground-truth corpus is empty");
  }

  std::vector<Detection> kept;
  if (options.apply_postprocess) {
    kept = Postprocess(dets, manifest, options.params);
  } else {
    kept.assign(dets.begin(), dets.end());
  }
  std::vector<std::vector<Detection>> per_image(num_images);
  for (Detection& d : kept) {
    const auto idx = manifest.IndexOf(d.image_id);
    if (!idx) {
      throw Error(ErrorCode::kUnknownImage,
                  "detection references unknown image_id '" + d.image_id + "'");
    }
    per_image[*idx].push_back(std::move(d));
  }

  // Sweep thresholds plus iou_main when it is not one of them.
  std::vector<double> thresholds;
  for (double t : IouThresholdSweep()) thresholds.push_back(t);
  std::size_t main_idx = thresholds.size();
  for (std::size_t k = 0; k < thresholds.size(); ++k) {
    if (thresholds[k] == options.iou_main) main_idx = k;
  }
  if (main_idx == thresholds.size()) thresholds.push_back(options.iou_main);

  // tp[threshold][image][detection]
  std::vector<std::vector<std::vector<char>>> tp(
      thresholds.size(), std::vector<std::vector<char>>(num_images));
  std::vector<MatchSet> main_sets(num_images);
  ParallelFor(num_images, options.workers, [&](std::size_t i) {
    const auto& gt = dataset.ground_truth[i];
    const auto& image_dets = per_image[i];
    const ManifestEntry& entry = manifest.entries()[i];
    const ImageGeometry geo = PrepareImage(gt, image_dets, entry.dims);
    for (std::size_t k = 0; k < thresholds.size(); ++k) {
      const auto match = GreedyAssign(gt, image_dets, geo, thresholds[k]);
      auto& flags = tp[k][i];
      flags.resize(image_dets.size());
      for (std::size_t d = 0; d < image_dets.size(); ++d) {
        flags[d] = match[d] != kNoMatch;
      }
      if (k == main_idx) {
        main_sets[i] = BuildMatchSet(gt, image_dets, geo, match,
                                     entry.image_id, thresholds[k]);
      }
    }
  });

  // The pooled order is threshold independent: sort it once.
  std::vector<std::pair<std::size_t, std::size_t>> pooled;
  pooled.reserve(kept.size());
  for (std::size_t i = 0; i < num_images; ++i) {
    for (std::size_t d = 0; d < per_image[i].size(); ++d) pooled.emplace_back(i, d);
  }
  std::sort(pooled.begin(), pooled.end(), [&](const auto& a, const auto& b) {
    const double ca = per_image[a.first][a.second].confidence;
    const double cb = per_image[b.first][b.second].confidence;
    if (ca != cb) return ca > cb;
    const std::string& ia = manifest.entries()[a.first].image_id;
    const std::string& ib = manifest.entries()[b.first].image_id;
    if (ia != ib) return ia < ib;
    return a.second < b.second;
  });

  auto curve_for = [&](std::size_t k) {
    std::vector<PRPoint> curve;
    curve.reserve(pooled.size());
    std::size_t cum_tp = 0;
    std::size_t cum_fp = 0;
    for (const auto& [i, d] : pooled) {
      (tp[k][i][d] ? cum_tp : cum_fp) += 1;
      curve.push_back(
          {per_image[i][d].confidence, cum_tp, cum_fp,
           static_cast<double>(cum_tp) / static_cast<double>(cum_tp + cum_fp),
           static_cast<double>(cum_tp) / static_cast<double>(num_gt)});
    }
    return curve;
  };

  EvalReport report;
  report.params = options.params;
  report.postprocess_applied = options.apply_postprocess;
  report.iou_main = options.iou_main;
  report.ap_mode = options.ap_mode;
  report.bin_thresholds = options.bin_thresholds;
  report.counts = {num_images, num_gt, kept.size()};

  double ap_sum = 0.0;
  for (std::size_t k = 0; k < thresholds.size(); ++k) {
    const auto curve = curve_for(k);
    const double ap = AveragePrecision(curve, options.ap_mode);
    if (k < kNumIouThresholds) {
      report.ap_per_iou.emplace_back(thresholds[k], ap);
      ap_sum += ap;
      if (options.per_iou_summary) {
        IouSummary s{thresholds[k], ap, 0.0, 0.0, 0.0, std::nullopt};
        if (!curve.empty()) {
          const F1Point f = MaxF1Point(curve);
          std::tie(s.precision, s.recall, s.f1) =
              std::tuple(f.precision, f.recall, f.f1);
          s.confidence = f.confidence;
        }
        report.per_iou.push_back(s);
      }
    }
    if (k == main_idx) {
      report.ap_iou_main = ap;
      if (curve.empty()) {
        report.precision_undefined = true;
      } else {
        const F1Point f = MaxF1Point(curve);
        report.precision = f.precision;
        report.recall = f.recall;
        report.f1 = f.f1;
        report.conf_at_max_f1 = f.confidence;
      }
    }
  }
  report.map50 = report.ap_per_iou.front().second;
  report.map5095 = ap_sum / static_cast<double>(kNumIouThresholds);

  std::vector<MatchedPair> pairs;
  for (const MatchSet& s : main_sets) {
    pairs.insert(pairs.end(), s.pairs.begin(), s.pairs.end());
  }
  report.bin_report =
      BinConfusionReport(pairs, manifest, options.bin_thresholds);
  return report;
}

}  // namespace loggauge
