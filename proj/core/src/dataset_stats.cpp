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

#include "loggauge/dataset_stats.hpp"

#include <algorithm>
#include <limits>

#include "loggauge/error.hpp"

namespace loggauge {

namespace {

void Extend(Range& r, double v, bool first) {
  if (first) {
    r = {v, v};
    return;
  }
  r.min = std::min(r.min, v);
  r.max = std::max(r.max, v);
}

}  // namespace

DatasetStats ComputeStats(const Dataset& dataset) {
  const auto& entries = dataset.manifest.entries();
  if (entries.empty()) {
    throw Error(ErrorCode::kEmptyInput, "dataset has no images");
  }
  if (dataset.ground_truth.size() != entries.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "dataset ground truth does not line up with its manifest");
  }

  DatasetStats stats;
  stats.num_images = entries.size();
  double area_sum = 0.0;
  double per_image_sum = 0.0;
  std::size_t images_with_instances = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const ImageDims& dims = entries[i].dims;
    ValidateDims(dims);
    const double image_area =
        static_cast<double>(dims.width) * static_cast<double>(dims.height);
    double image_sum = 0.0;
    for (const GroundTruth& gt : dataset.ground_truth[i]) {
      const PixelBox box = NormToPixel(gt.box, dims);
      const double pct = 100.0 * box.area() / image_area;
      const bool first = stats.num_instances == 0;
      Extend(stats.area_pct_range, pct, first);
      Extend(stats.width_range_px, box.width(), first);
      Extend(stats.height_range_px, box.height(), first);
      ++stats.per_class_counts[gt.class_id];
      ++stats.num_instances;
      area_sum += pct;
      image_sum += pct;
    }
    if (!dataset.ground_truth[i].empty()) {
      per_image_sum +=
          image_sum / static_cast<double>(dataset.ground_truth[i].size());
      ++images_with_instances;
    }
  }
  if (stats.num_instances == 0) {
    throw Error(ErrorCode::kEmptyInput, "dataset has no annotated instances");
  }
  stats.avg_per_image = static_cast<double>(stats.num_instances) /
                        static_cast<double>(stats.num_images);
  stats.avg_area_pct = area_sum / static_cast<double>(stats.num_instances);
  stats.avg_area_pct_per_image =
      per_image_sum / static_cast<double>(images_with_instances);
  return stats;
}

}  // namespace loggauge
