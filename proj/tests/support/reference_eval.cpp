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

#include "reference_eval.hpp"

#include <algorithm>
#include <cmath>

namespace loggauge::reference {

RefBox ToPixels(const NormBox& b, const ImageDims& dims) {
  const double w = dims.width;
  const double h = dims.height;
  auto clip = [](double v, double hi) { return v < 0.0 ? 0.0 : (v > hi ? hi : v); };
  return {clip((b.cx - b.w / 2) * w, w), clip((b.cy - b.h / 2) * h, h),
          clip((b.cx + b.w / 2) * w, w), clip((b.cy + b.h / 2) * h, h)};
}

double RefIou(const RefBox& a, const RefBox& b) {
  const double left = a.x0 > b.x0 ? a.x0 : b.x0;
  const double right = a.x1 < b.x1 ? a.x1 : b.x1;
  const double top = a.y0 > b.y0 ? a.y0 : b.y0;
  const double bottom = a.y1 < b.y1 ? a.y1 : b.y1;
  if (right <= left || bottom <= top) return 0.0;
  const double inter = (right - left) * (bottom - top);
  const double area_a = (a.x1 - a.x0) * (a.y1 - a.y0);
  const double area_b = (b.x1 - b.x0) * (b.y1 - b.y0);
  const double uni = area_a + area_b - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

namespace {

// Rank by selection: repeatedly take the highest confidence not yet taken,
// preferring the lowest index among equals.
std::vector<std::size_t> RankByConfidence(const std::vector<Detection>& dets) {
  std::vector<bool> used(dets.size(), false);
  std::vector<std::size_t> rank;
  for (std::size_t step = 0; step < dets.size(); ++step) {
    std::size_t pick = dets.size();
    for (std::size_t i = 0; i < dets.size(); ++i) {
      if (used[i]) continue;
      if (pick == dets.size() || dets[i].confidence > dets[pick].confidence) {
        pick = i;
      }
    }
    used[pick] = true;
    rank.push_back(pick);
  }
  return rank;
}

std::size_t RefBin(double width, double thin_max, double medium_max) {
  if (width < thin_max) return 0;
  if (width > medium_max) return 2;
  return 1;
}

double RefF1(double p, double r) {
  if (p + r == 0.0) return 0.0;
  return 2.0 * p * r / (p + r);
}

}  // namespace

std::vector<std::size_t> ReferenceNms(const std::vector<Detection>& dets,
                                      const ImageDims& dims, double threshold) {
  const auto rank = RankByConfidence(dets);
  std::vector<bool> suppressed(dets.size(), false);
  std::vector<std::size_t> kept;
  for (std::size_t a = 0; a < rank.size(); ++a) {
    const std::size_t i = rank[a];
    if (suppressed[i]) continue;
    kept.push_back(i);
    const RefBox bi = ToPixels(dets[i].box, dims);
    for (std::size_t b = a + 1; b < rank.size(); ++b) {
      const std::size_t j = rank[b];
      if (dets[j].class_id != dets[i].class_id) continue;
      if (RefIou(bi, ToPixels(dets[j].box, dims)) > threshold) {
        suppressed[j] = true;
      }
    }
  }
  return kept;
}

RefMatch ReferenceMatch(const std::vector<GroundTruth>& gt,
                        const std::vector<Detection>& dets,
                        const ImageDims& dims, double threshold) {
  RefMatch m;
  m.det_to_gt.assign(dets.size(), -1);
  std::vector<bool> gt_taken(gt.size(), false);
  for (std::size_t d : RankByConfidence(dets)) {
    const RefBox db = ToPixels(dets[d].box, dims);
    int best = -1;
    double best_iou = 0.0;
    for (std::size_t g = 0; g < gt.size(); ++g) {
      if (gt_taken[g] || gt[g].class_id != dets[d].class_id) continue;
      const double v = RefIou(db, ToPixels(gt[g].box, dims));
      if (v < threshold) continue;
      if (best < 0 || v > best_iou) {
        best = static_cast<int>(g);
        best_iou = v;
      }
    }
    if (best >= 0) {
      gt_taken[best] = true;
      m.det_to_gt[d] = best;
      ++m.tp;
    } else {
      ++m.fp;
    }
  }
  m.fn = gt.size() - m.tp;
  return m;
}

double ReferenceAp101(const std::vector<RefPoint>& curve) {
  double sum = 0.0;
  for (int k = 0; k <= 100; ++k) {
    const double r = static_cast<double>(k) / 100.0;
    double best = 0.0;
    for (const RefPoint& p : curve) {
      if (p.recall >= r && p.precision > best) best = p.precision;
    }
    sum += best;
  }
  return sum / 101.0;
}

double ReferenceApAllPoint(const std::vector<RefPoint>& curve) {
  double area = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (!(curve[i].recall > prev)) continue;
    double env = 0.0;
    for (const RefPoint& p : curve) {
      if (p.recall >= curve[i].recall && p.precision > env) env = p.precision;
    }
    area += (curve[i].recall - prev) * env;
    prev = curve[i].recall;
  }
  return area;
}

RefReport ReferenceEvaluate(const RefInput& input, double iou_main,
                            double thin_max, double medium_max,
                            bool all_point) {
  std::size_t num_gt = 0;
  for (const auto& g : input.gt) num_gt += g.size();

  struct Entry {
    double confidence;
    const std::string* image_id;
    std::size_t index;
    bool tp;
  };

  auto curve_at = [&](double threshold) {
    std::vector<Entry> entries;
    for (std::size_t i = 0; i < input.image_ids.size(); ++i) {
      const RefMatch m =
          ReferenceMatch(input.gt[i], input.dets[i], input.dims[i], threshold);
      for (std::size_t d = 0; d < input.dets[i].size(); ++d) {
        entries.push_back({input.dets[i][d].confidence, &input.image_ids[i], d,
                           m.det_to_gt[d] >= 0});
      }
    }
    // Selection sort under the total order (confidence desc, id, index).
    auto before = [](const Entry& a, const Entry& b) {
      if (a.confidence != b.confidence) return a.confidence > b.confidence;
      if (*a.image_id != *b.image_id) return *a.image_id < *b.image_id;
      return a.index < b.index;
    };
    for (std::size_t i = 0; i < entries.size(); ++i) {
      std::size_t best = i;
      for (std::size_t j = i + 1; j < entries.size(); ++j) {
        if (before(entries[j], entries[best])) best = j;
      }
      std::swap(entries[i], entries[best]);
    }
    std::vector<RefPoint> curve;
    double tp = 0.0;
    double fp = 0.0;
    for (const Entry& e : entries) {
      if (e.tp) {
        tp += 1.0;
      } else {
        fp += 1.0;
      }
      curve.push_back({e.confidence, tp / (tp + fp),
                       tp / static_cast<double>(num_gt)});
    }
    return curve;
  };

  RefReport report;
  double sum = 0.0;
  for (int k = 0; k < 10; ++k) {
    const double t = static_cast<double>(50 + 5 * k) / 100.0;
    const auto curve = curve_at(t);
    report.ap[k] = all_point ? ReferenceApAllPoint(curve) : ReferenceAp101(curve);
    sum += report.ap[k];
  }
  report.map50 = report.ap[0];
  report.map5095 = sum / 10.0;

  const auto main_curve = curve_at(iou_main);
  report.ap_main =
      all_point ? ReferenceApAllPoint(main_curve) : ReferenceAp101(main_curve);
  // Max F1; on equal F1 prefer higher confidence, then the earlier point.
  for (std::size_t i = 0; i < main_curve.size(); ++i) {
    const RefPoint& p = main_curve[i];
    const double f = RefF1(p.precision, p.recall);
    bool take = !report.conf_at_max_f1.has_value() || f > report.f1 ||
                (f == report.f1 && p.confidence > *report.conf_at_max_f1);
    if (take) {
      report.f1 = f;
      report.precision = p.precision;
      report.recall = p.recall;
      report.conf_at_max_f1 = p.confidence;
    }
  }

  std::size_t pairs = 0;
  std::size_t agree = 0;
  for (std::size_t i = 0; i < input.image_ids.size(); ++i) {
    const RefMatch m =
        ReferenceMatch(input.gt[i], input.dets[i], input.dims[i], iou_main);
    const double width = input.dims[i].width;
    for (std::size_t d = 0; d < input.dets[i].size(); ++d) {
      if (m.det_to_gt[d] < 0) continue;
      const std::size_t row =
          RefBin(input.gt[i][m.det_to_gt[d]].box.w * width, thin_max, medium_max);
      const std::size_t col =
          RefBin(input.dets[i][d].box.w * width, thin_max, medium_max);
      ++report.confusion[row][col];
      ++pairs;
      if (row == col) ++agree;
    }
  }
  if (pairs > 0) {
    report.bin_accuracy = static_cast<double>(agree) / static_cast<double>(pairs);
  }
  return report;
}

}  // namespace loggauge::reference
