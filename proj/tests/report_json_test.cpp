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

#include "loggauge/report_json.hpp"

#include <gtest/gtest.h>

#include <regex>
#include <string>
#include <vector>

#include "synthetic.hpp"

namespace loggauge {
namespace {

// Top-level keys in emission order, found by scanning for two-space indented
// keys. Keeps the test independent of any JSON library.
std::vector<std::string> TopLevelKeys(const std::string& json) {
  std::vector<std::string> keys;
  const std::regex key_re("^  \"([a-z0-9_]+)\":");
  std::size_t start = 0;
  while (start < json.size()) {
    std::size_t end = json.find('\n', start);
    if (end == std::string::npos) end = json.size();
    const std::string line = json.substr(start, end - start);
    std::smatch m;
    if (std::regex_search(line, m, key_re)) keys.push_back(m[1]);
    start = end + 1;
  }
  return keys;
}

TEST(EvalReportToJsonTest, SchemaKeysInOrder) {
  const auto corpus = testing::MakeCorpus(113, 4);
  const EvalReport r = Evaluate(corpus.dataset, corpus.detections);
  const std::string json = EvalReportToJson(r);
  const std::vector<std::string> expected{
      "precision",   "precision_undefined", "recall",   "f1",
      "conf_at_max_f1", "ap_per_iou",     "ap_iou_main", "map50",
      "map5095",     "bin_report",          "params",   "iou_main",
      "ap_mode",     "bin_thresholds",      "counts"};
  EXPECT_EQ(TopLevelKeys(json), expected);
  EXPECT_NE(json.find("\"0.50\":"), std::string::npos);
  EXPECT_NE(json.find("\"0.95\":"), std::string::npos);
  EXPECT_EQ(json.back(), '\n');
}

TEST(EvalReportToJsonTest, TimestampOnlyWhenRequested) {
  const auto corpus = testing::MakeCorpus(127, 2);
  const EvalReport r = Evaluate(corpus.dataset, corpus.detections);
  EXPECT_EQ(EvalReportToJson(r).find("timestamp"), std::string::npos);
  const std::string stamped = EvalReportToJson(r, "2026-01-01T00:00:00Z");
  EXPECT_NE(stamped.find("\"timestamp\": \"2026-01-01T00:00:00Z\""),
            std::string::npos);
}

TEST(EvalReportToJsonTest, UndefinedValuesAreNull) {
  const auto corpus = testing::MakeCorpus(131, 2);
  const std::string json = EvalReportToJson(Evaluate(corpus.dataset, {}));
  EXPECT_NE(json.find("\"conf_at_max_f1\": null"), std::string::npos);
  EXPECT_NE(json.find("\"bin_accuracy\": null"), std::string::npos);
  EXPECT_NE(json.find("\"precision_undefined\": true"), std::string::npos);
}

TEST(UtcTimestampTest, Iso8601Shape) {
  EXPECT_TRUE(std::regex_match(
      UtcTimestamp(), std::regex(R"(\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}Z)")));
}

TEST(StatsToTableTest, RowsPresent) {
  const auto corpus = testing::MakeCorpus(137, 5);
  const std::string table = StatsToTable(ComputeStats(corpus.dataset));
  for (const char* row :
       {"Total Images", "Total Annotated Log Instances",
        "Average Logs per Image", "Number of Classes", "Average Object Area",
        "Object Area Range", "Object Width Range", "Object Height Range"}) {
    EXPECT_NE(table.find(row), std::string::npos) << row;
  }
  EXPECT_NE(table.find("5"), std::string::npos);
}

TEST(BinReportToJsonTest, Keys) {
  const std::string json =
      BinReportToJson({1, 2, 3}, std::nullopt, BinThresholds{});
  EXPECT_NE(json.find("\"thin\": 1"), std::string::npos);
  EXPECT_NE(json.find("\"thick\": 3"), std::string::npos);
  EXPECT_EQ(json.find("matched"), std::string::npos);
}

}  // namespace
}  // namespace loggauge
