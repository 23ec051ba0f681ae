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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "loggauge/error.hpp"

namespace loggauge {
namespace {

constexpr BinThresholds kDefault{};

TEST(AssignBinTest, BoundaryValues) {
  EXPECT_EQ(AssignBin(0.0, kDefault), DiameterBin::kThin);
  EXPECT_EQ(AssignBin(29.9, kDefault), DiameterBin::kThin);
  EXPECT_EQ(AssignBin(30.0, kDefault), DiameterBin::kMedium);
  EXPECT_EQ(AssignBin(60.0, kDefault), DiameterBin::kMedium);
  EXPECT_EQ(AssignBin(60.1, kDefault), DiameterBin::kThick);
  EXPECT_EQ(AssignBin(std::nextafter(30.0, 0.0), kDefault), DiameterBin::kThin);
  EXPECT_EQ(AssignBin(std::nextafter(60.0, 100.0), kDefault),
            DiameterBin::kThick);
}

TEST(AssignBinTest, InvalidWidths) {
  EXPECT_THROW(AssignBin(-1.0, kDefault), Error);
  EXPECT_THROW(AssignBin(std::numeric_limits<double>::quiet_NaN(), kDefault),
               Error);
  EXPECT_THROW(AssignBin(std::numeric_limits<double>::infinity(), kDefault),
               Error);
}

TEST(BinThresholdsTest, Validation) {
  EXPECT_NO_THROW(Validate(kDefault));
  EXPECT_NO_THROW(Validate(BinThresholds{40, 40}));
  EXPECT_THROW(Validate(BinThresholds{60, 30}), Error);
  EXPECT_THROW(Validate(BinThresholds{0, 30}), Error);
}

TEST(BinNameTest, Names) {
  EXPECT_EQ(BinName(DiameterBin::kThin), "thin");
  EXPECT_EQ(BinName(DiameterBin::kMedium), "medium");
  EXPECT_EQ(BinName(DiameterBin::kThick), "thick");
}

TEST(BinDetectionsTest, WidthScalesWithImageWidth) {
  const DatasetManifest manifest({{"big", {4608, 3456}, "b.txt", std::nullopt},
                                  {"small", {40, 40}, "s.txt", std::nullopt}});
  const std::vector<Detection> dets{{"big", 0, {0.5, 0.5, 0.01, 0.1}, 0.5},
                                    {"small", 0, {0.5, 0.5, 0.5, 0.5}, 0.5}};
  const auto binned = BinDetections(dets, manifest, kDefault);
  ASSERT_EQ(binned.size(), 2u);
  EXPECT_NEAR(binned[0].width_px, 46.08, 1e-9);
  EXPECT_EQ(binned[0].bin, DiameterBin::kMedium);
  EXPECT_NEAR(binned[1].width_px, 20.0, 1e-9);
  EXPECT_EQ(binned[1].bin, DiameterBin::kThin);

  const BinHistogram h = Histogram(binned);
  EXPECT_EQ(h, (BinHistogram{1, 1, 0}));
}

TEST(BinDetectionsTest, UnknownImage) {
  const DatasetManifest manifest({{"a", {100, 100}, "a.txt", std::nullopt}});
  const std::vector<Detection> dets{{"q", 0, {0.5, 0.5, 0.1, 0.1}, 0.5}};
  EXPECT_THROW(BinDetections(dets, manifest, kDefault), Error);
}

TEST(BinConfusionReportTest, MismatchedBins) {
  const DatasetManifest manifest({{"a", {1000, 1000}, "a.txt", std::nullopt}});
  const GroundTruth gt{"a", 0, {0.5, 0.5, 0.025, 0.1}};
  const Detection det{"a", 0, {0.5, 0.5, 0.035, 0.1}, 0.9};
  const std::vector<MatchedPair> pairs{{gt, det, 0.7}};
  const BinReport r = BinConfusionReport(pairs, manifest, kDefault);
  EXPECT_EQ(r.confusion[0][1], 1u);
  ASSERT_TRUE(r.bin_accuracy.has_value());
  EXPECT_EQ(*r.bin_accuracy, 0.0);
  EXPECT_EQ(r.histogram, (BinHistogram{0, 1, 0}));
}

TEST(BinConfusionReportTest, EmptyPairsLeaveAccuracyUndefined) {
  const DatasetManifest manifest({{"a", {1000, 1000}, "a.txt", std::nullopt}});
  const BinReport r = BinConfusionReport({}, manifest, kDefault);
  EXPECT_FALSE(r.bin_accuracy.has_value());
  EXPECT_EQ(r.histogram, (BinHistogram{0, 0, 0}));
}

TEST(BinConfusionReportTest, AccuracyIsDiagonalShare) {
  const DatasetManifest manifest({{"a", {100, 100}, "a.txt", std::nullopt}});
  std::vector<MatchedPair> pairs;
  const double widths[][2] = {{0.1, 0.1}, {0.5, 0.5}, {0.9, 0.9}, {0.1, 0.5}};
  for (const auto& w : widths) {
    pairs.push_back({{"a", 0, {0.5, 0.5, w[0], 0.1}},
                     {"a", 0, {0.5, 0.5, w[1], 0.1}, 0.5},
                     0.5});
  }
  const BinReport r = BinConfusionReport(pairs, manifest, kDefault);
  EXPECT_DOUBLE_EQ(*r.bin_accuracy, 0.75);
  std::size_t total = 0;
  for (const auto& row : r.confusion) {
    for (std::size_t c : row) total += c;
  }
  EXPECT_EQ(total, pairs.size());
}

TEST(AssignBinPropertyTest, MonotoneAndExhaustive) {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> width(0.0, 200.0);
  for (int i = 0; i < 10000; ++i) {
    double a = width(rng);
    double b = width(rng);
    if (a > b) std::swap(a, b);
    EXPECT_LE(static_cast<int>(AssignBin(a, kDefault)),
              static_cast<int>(AssignBin(b, kDefault)));
  }
}

TEST(AssignBinPropertyTest, ScalingWidthAndThresholdsTogether) {
  std::mt19937_64 rng(67);
  std::uniform_real_distribution<double> width(0.0, 200.0);
  for (int i = 0; i < 1000; ++i) {
    const double w = width(rng);
    EXPECT_EQ(AssignBin(w * 2.0, BinThresholds{60.0, 120.0}),
              AssignBin(w, kDefault));
  }
}

}  // namespace
}  // namespace loggauge
