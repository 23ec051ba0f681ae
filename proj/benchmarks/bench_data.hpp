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

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "loggauge/annotations.hpp"

namespace loggauge::bench {

inline NormBox RandomBox(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> extent(0.01, 0.2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double w = extent(rng);
  const double h = extent(rng);
  return {w / 2 + unit(rng) * (1 - w), h / 2 + unit(rng) * (1 - h), w, h};
}

struct Corpus {
  Dataset dataset;
  std::vector<Detection> detections;
};

// Images of 4608x3456 holding `per_image` logs each; every log is detected
// with a small offset, plus a few spurious boxes.
inline Corpus MakeCorpus(int images, int per_image, std::uint64_t seed = 1) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<ManifestEntry> entries;
  Corpus c;
  for (int i = 0; i < images; ++i) {
    const std::string id = "img_" + std::to_string(i);
    entries.push_back({id, {4608, 3456}, id + ".txt", std::nullopt});
    std::vector<GroundTruth> gt;
    for (int k = 0; k < per_image; ++k) {
      const NormBox b = RandomBox(rng);
      gt.push_back({id, 0, b});
      NormBox d = b;
      d.cx = std::clamp(d.cx + 0.1 * d.w * (unit(rng) - 0.5), d.w / 2, 1 - d.w / 2);
      c.detections.push_back({id, 0, d, 0.3 + 0.7 * unit(rng)});
    }
    for (int k = 0; k < per_image / 5; ++k) {
      c.detections.push_back({id, 0, RandomBox(rng), 0.5 * unit(rng)});
    }
    c.dataset.ground_truth.push_back(std::move(gt));
  }
  c.dataset.manifest = DatasetManifest(std::move(entries));
  return c;
}

}  // namespace loggauge::bench
