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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "loggauge/error.hpp"
#include "reference_eval.hpp"
#include "synthetic.hpp"

namespace loggauge {
namespace {

constexpr ImageDims kDims{1000, 1000};

Detection Det(double cx, double cy, double w, double h, double conf,
              int cls = 0, const std::string& id = "a") {
  return {id, cls, {cx, cy, w, h}, conf};
}

std::vector<double> Confidences(const std::vector<Detection>& dets) {
  std::vector<double> out;
  for (const auto& d : dets) out.push_back(d.confidence);
  return out;
}

TEST(FilterConfidenceTest, KeepsAtOrAboveThresholdInOrder) {
  const std::vector<Detection> dets{Det(0.5, 0.5, 0.1, 0.1, 0.9),
                                    Det(0.5, 0.5, 0.1, 0.1, 0.3),
                                    Det(0.5, 0.5, 0.1, 0.1, 0.5)};
  EXPECT_EQ(Confidences(FilterConfidence(dets, 0.5)),
            (std::vector<double>{0.9, 0.5}));
  EXPECT_EQ(FilterConfidence(dets, 0.0), dets);
  EXPECT_TRUE(FilterConfidence(dets, 1.0).empty());
}

TEST(ValidateParamsTest, RejectsOutOfRange) {
  EXPECT_NO_THROW(Validate(PostprocessParams{}));
  EXPECT_THROW(Validate(PostprocessParams{-0.1, 0.45}), Error);
  EXPECT_THROW(Validate(PostprocessParams{0.25, 1.5}), Error);
}

TEST(GreedyNmsTest, SuppressesOverlapAboveThreshold) {
  // Same height, horizontal offset chosen so IoU = 0.6: overlap/union with
  // widths 0.2 and shift s gives (0.2-s)/(0.2+s) = 0.6 at s = 0.05.
  const Detection a = Det(0.50, 0.5, 0.2, 0.2, 0.9);
  const Detection b = Det(0.55, 0.5, 0.2, 0.2, 0.8);
  const std::vector<Detection> dets{b, a};
  const auto kept = GreedyNms(dets, kDims, 0.45);
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_EQ(kept[0], a);
  EXPECT_EQ(GreedyNms(dets, kDims, 0.61).size(), 2u);
}

TEST(GreedyNmsTest, DisjointBoxesAllKeptInConfidenceOrder) {
  const std::vector<Detection> dets{Det(0.1, 0.1, 0.1, 0.1, 0.2),
                                    Det(0.5, 0.5, 0.1, 0.1, 0.7),
                                    Det(0.9, 0.9, 0.1, 0.1, 0.4)};
  EXPECT_EQ(Confidences(GreedyNms(dets, kDims, 0.45)),
            (std::vector<double>{0.7, 0.4, 0.2}));
}

TEST(GreedyNmsTest, ClassesDoNotSuppressEachOther) {
  const std::vector<Detection> dets{Det(0.5, 0.5, 0.2, 0.2, 0.9, 0),
                                    Det(0.5, 0.5, 0.2, 0.2, 0.8, 1)};
  EXPECT_EQ(GreedyNms(dets, kDims, 0.45).size(), 2u);
}

TEST(GreedyNmsTest, RejectsMixedImages) {
  const std::vector<Detection> dets{Det(0.5, 0.5, 0.2, 0.2, 0.9, 0, "a"),
                                    Det(0.5, 0.5, 0.2, 0.2, 0.8, 0, "b")};
  EXPECT_THROW(GreedyNms(dets, kDims, 0.45), Error);
}

std::vector<Detection> RandomClusteredDets(std::mt19937_64& rng, int n,
                                           bool quantize) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_real_distribution<double> shift(-0.05, 0.05);
  std::vector<Detection> dets;
  const NormBox anchor = testing::RandomBox(rng, 0.1, 0.3);
  for (int i = 0; i < n; ++i) {
    NormBox b = anchor;
    b.cx += shift(rng);
    b.cy += shift(rng);
    b.w *= 1.0 + shift(rng);
    double conf = u(rng);
    if (quantize) conf = std::round(conf * 4.0) / 4.0;
    dets.push_back({"a", static_cast<int>(u(rng) * 2), testing::FitInside(b),
                    conf});
  }
  return dets;
}

TEST(GreedyNmsPropertyTest, MatchesBruteForceReference) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + trial % 6;
    const auto dets = RandomClusteredDets(rng, n, trial % 2 == 0);
    const double thr = 0.1 + 0.8 * (trial % 9) / 8.0;
    const auto kept = GreedyNms(dets, kDims, thr);
    const auto ref = reference::ReferenceNms(dets, kDims, thr);
    ASSERT_EQ(kept.size(), ref.size()) << "trial " << trial;
    for (std::size_t i = 0; i < kept.size(); ++i) {
      EXPECT_EQ(kept[i], dets[ref[i]]) << "trial " << trial;
    }
  }
}

TEST(GreedyNmsPropertyTest, KeptPairsNeverExceedThreshold) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    const auto dets = RandomClusteredDets(rng, 12, false);
    const auto kept = GreedyNms(dets, kDims, 0.45);
    for (std::size_t i = 0; i < kept.size(); ++i) {
      for (std::size_t j = i + 1; j < kept.size(); ++j) {
        if (kept[i].class_id != kept[j].class_id) continue;
        EXPECT_LE(Iou(NormToPixel(kept[i].box, kDims),
                      NormToPixel(kept[j].box, kDims)),
                  0.45);
      }
    }
  }
}

TEST(GreedyNmsPropertyTest, InvariantUnderInputPermutationWithDistinctScores) {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 50; ++trial) {
    auto dets = RandomClusteredDets(rng, 8, false);
    const auto kept = GreedyNms(dets, kDims, 0.5);
    std::shuffle(dets.begin(), dets.end(), rng);
    EXPECT_EQ(GreedyNms(dets, kDims, 0.5), kept);
  }
}

TEST(GreedyNmsPropertyTest, IdempotentAndThresholdOneKeepsAll) {
  std::mt19937_64 rng(53);
  const auto dets = RandomClusteredDets(rng, 10, false);
  const auto once = GreedyNms(dets, kDims, 0.45);
  EXPECT_EQ(GreedyNms(once, kDims, 0.45), once);
  EXPECT_EQ(GreedyNms(dets, kDims, 1.0).size(), dets.size());
}

TEST(PostprocessTest, FiltersThenSuppressesPerImage) {
  const DatasetManifest manifest(
      {{"b", {100, 100}, "b.txt", std::nullopt},
       {"a", {100, 100}, "a.txt", std::nullopt}});
  const std::vector<Detection> dets{
      Det(0.5, 0.5, 0.2, 0.2, 0.8, 0, "b"), Det(0.5, 0.5, 0.2, 0.2, 0.9, 0, "b"),
      Det(0.5, 0.5, 0.2, 0.2, 0.1, 0, "a"), Det(0.2, 0.2, 0.1, 0.1, 0.6, 0, "a")};
  const auto out = Postprocess(dets, manifest, {0.25, 0.45});
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].image_id, "a");
  EXPECT_EQ(out[0].confidence, 0.6);
  EXPECT_EQ(out[1].image_id, "b");
  EXPECT_EQ(out[1].confidence, 0.9);
}

TEST(PostprocessTest, IdentitySettingsKeepEverything) {
  const auto corpus = testing::MakeCorpus(59, 5);
  const auto out =
      Postprocess(corpus.detections, corpus.dataset.manifest, {0.0, 1.0});
  EXPECT_EQ(out.size(), corpus.detections.size());
}

TEST(PostprocessTest, UnknownImageThrows) {
  const DatasetManifest manifest({{"a", {100, 100}, "a.txt", std::nullopt}});
  const std::vector<Detection> dets{Det(0.5, 0.5, 0.2, 0.2, 0.01, 0, "zz")};
  try {
    Postprocess(dets, manifest, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownImage);
  }
}

}  // namespace
}  // namespace loggauge
