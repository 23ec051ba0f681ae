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
#include <map>
#include <utility>

#include "loggauge/annotations.hpp"

namespace loggauge {

struct Range {
  double min = 0.0;
  double max = 0.0;
};

// Dataset summary: counts, relative object areas and pixel extents.
struct DatasetStats {
  std::size_t num_images = 0;
  std::size_t num_instances = 0;
  double avg_per_image = 0.0;
  // Mean of box area / image area (in percent) over all instances.
  double avg_area_pct = 0.0;
  // Mean over images (with at least one instance) of the per-image mean.
  double avg_area_pct_per_image = 0.0;
  Range area_pct_range;
  Range width_range_px;
  Range height_range_px;
  std::map<int, std::size_t> per_class_counts;
};

// Throws Error(kEmptyInput) for a dataset without images or instances.
DatasetStats ComputeStats(const Dataset& dataset);

}  // namespace loggauge
