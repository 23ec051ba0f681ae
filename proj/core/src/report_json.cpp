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

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>

#include "json.hpp"

namespace loggauge {

using nlohmann::ordered_json;

namespace {

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

ordered_json OptionalNumber(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json HistogramJson(const BinHistogram& h) {
  ordered_json out;
  for (std::size_t b = 0; b < kNumBins; ++b) {
    out[std::string(BinName(static_cast<DiameterBin>(b)))] = h[b];
  }
  return out;
}

ordered_json ThresholdsJson(const BinThresholds& t) {
  return {{"thin_max", t.thin_max}, {"medium_max", t.medium_max}};
}

ordered_json BinReportJson(const BinReport& r) {
  ordered_json confusion = ordered_json::array();
  for (const auto& row : r.confusion) confusion.push_back(row);
  ordered_json out;
  out["histogram"] = HistogramJson(r.histogram);
  out["confusion"] = std::move(confusion);
  out["bin_accuracy"] = OptionalNumber(r.bin_accuracy);
  out["bin_accuracy_undefined"] = !r.bin_accuracy.has_value();
  return out;
}

ordered_json RangeJson(const Range& r) { return {r.min, r.max}; }

std::string Dump(ordered_json& root, const std::optional<std::string>& ts) {
  if (ts) root["timestamp"] = *ts;
  return root.dump(2) + "\n";
}

}  // namespace

std::string EvalReportToJson(const EvalReport& report,
                             const std::optional<std::string>& timestamp) {
  ordered_json ap_per_iou = ordered_json::object();
  for (const auto& [t, ap] : report.ap_per_iou) ap_per_iou[Fixed(t, 2)] = ap;

  ordered_json root;
  root["precision"] = report.precision;
  root["precision_undefined"] = report.precision_undefined;
  root["recall"] = report.recall;
  root["f1"] = report.f1;
  root["conf_at_max_f1"] = OptionalNumber(report.conf_at_max_f1);
  root["ap_per_iou"] = std::move(ap_per_iou);
  root["ap_iou_main"] = report.ap_iou_main;
  root["map50"] = report.map50;
  root["map5095"] = report.map5095;
  root["bin_report"] = BinReportJson(report.bin_report);
  root["params"] = {{"conf_threshold", report.params.conf_threshold},
                    {"nms_iou_threshold", report.params.nms_iou_threshold},
                    {"postprocess_applied", report.postprocess_applied}};
  root["iou_main"] = report.iou_main;
  root["ap_mode"] = std::string(ApModeName(report.ap_mode));
  root["bin_thresholds"] = ThresholdsJson(report.bin_thresholds);
  root["counts"] = {{"images", report.counts.images},
                    {"gt", report.counts.gt},
                    {"detections", report.counts.detections}};
  if (!report.per_iou.empty()) {
    ordered_json per_iou = ordered_json::array();
    for (const IouSummary& s : report.per_iou) {
      per_iou.push_back({{"iou_threshold", s.iou_threshold},
                         {"ap", s.ap},
                         {"precision", s.precision},
                         {"recall", s.recall},
                         {"f1", s.f1},
                         {"confidence", OptionalNumber(s.confidence)}});
    }
    root["per_iou"] = std::move(per_iou);
  }
  return Dump(root, timestamp);
}

std::string BinReportToJson(const BinHistogram& histogram,
                            const std::optional<BinReport>& confusion,
                            const BinThresholds& thresholds,
                            const std::optional<std::string>& timestamp) {
  ordered_json root;
  root["histogram"] = HistogramJson(histogram);
  root["bin_thresholds"] = ThresholdsJson(thresholds);
  if (confusion) root["matched"] = BinReportJson(*confusion);
  return Dump(root, timestamp);
}

std::string StatsToJson(const DatasetStats& stats,
                        const std::optional<std::string>& timestamp) {
  ordered_json per_class = ordered_json::object();
  for (const auto& [cls, n] : stats.per_class_counts) {
    per_class[std::to_string(cls)] = n;
  }
  ordered_json root;
  root["num_images"] = stats.num_images;
  root["num_instances"] = stats.num_instances;
  root["avg_per_image"] = stats.avg_per_image;
  root["avg_area_pct"] = stats.avg_area_pct;
  root["avg_area_pct_per_image"] = stats.avg_area_pct_per_image;
  root["area_pct_range"] = RangeJson(stats.area_pct_range);
  root["width_range_px"] = RangeJson(stats.width_range_px);
  root["height_range_px"] = RangeJson(stats.height_range_px);
  root["per_class_counts"] = std::move(per_class);
  return Dump(root, timestamp);
}

std::string StatsToTable(const DatasetStats& s) {
  auto integer = [](double v) { return Fixed(std::round(v), 0); };
  const std::pair<std::string, std::string> rows[] = {
      {"Total Images", std::to_string(s.num_images)},
      {"Total Annotated Log Instances", std::to_string(s.num_instances)},
      {"Average Logs per Image", Fixed(s.avg_per_image, 2)},
      {"Number of Classes", std::to_string(s.per_class_counts.size())},
      {"Average Object Area",
       Fixed(s.avg_area_pct, 2) + "% of image area (per-image mean " +
           Fixed(s.avg_area_pct_per_image, 2) + "%)"},
      {"Object Area Range", integer(s.area_pct_range.min) + "% to " +
                                integer(s.area_pct_range.max) +
                                "% of image area"},
      {"Object Width Range", integer(s.width_range_px.min) + " px to " +
                                 integer(s.width_range_px.max) + " px"},
      {"Object Height Range", integer(s.height_range_px.min) + " px to " +
                                  integer(s.height_range_px.max) + " px"},
  };
  std::string out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-32s%s\n", "Attribute", "Value");
  out += line;
  for (const auto& [name, value] : rows) {
    std::snprintf(line, sizeof(line), "%-32s%s\n", name.c_str(), value.c_str());
    out += line;
  }
  return out;
}

std::string BinReportToTable(const BinHistogram& histogram,
                             const std::optional<BinReport>& confusion) {
  std::string out = "bin      count\n";
  char line[128];
  for (std::size_t b = 0; b < kNumBins; ++b) {
    std::snprintf(line, sizeof(line), "%-8s %zu\n",
                  std::string(BinName(static_cast<DiameterBin>(b))).c_str(),
                  histogram[b]);
    out += line;
  }
  if (!confusion) return out;
  out += "\nconfusion (rows: ground truth, cols: detection)\n";
  out += "         thin   medium thick\n";
  for (std::size_t r = 0; r < kNumBins; ++r) {
    std::snprintf(line, sizeof(line), "%-8s %-6zu %-6zu %-6zu\n",
                  std::string(BinName(static_cast<DiameterBin>(r))).c_str(),
                  confusion->confusion[r][0], confusion->confusion[r][1],
                  confusion->confusion[r][2]);
    out += line;
  }
  out += "bin_accuracy ";
  out += confusion->bin_accuracy ? Fixed(*confusion->bin_accuracy, 4)
                                 : std::string("undefined (no matched pairs)");
  out += "\n";
  return out;
}

std::string UtcTimestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace loggauge
