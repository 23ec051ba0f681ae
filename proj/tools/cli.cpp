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

#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "loggauge/annot_io.hpp"
#include "loggauge/dataset_stats.hpp"
#include "loggauge/error.hpp"
#include "loggauge/report_json.hpp"

namespace loggauge::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

double ParseDouble(std::string_view text, const std::string& what) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (text.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw Error(ErrorCode::kUsage,
                what + ": expected a number, got '" + std::string(text) + "'");
  }
  return v;
}

std::string Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

BinThresholds ParseThresholds(std::string_view text) {
  const auto comma = text.find(',');
  if (comma == std::string_view::npos) {
    throw Error(ErrorCode::kUsage, "--thresholds expects THIN_MAX,MEDIUM_MAX");
  }
  BinThresholds t{ParseDouble(Trim(text.substr(0, comma)), "--thresholds"),
                  ParseDouble(Trim(text.substr(comma + 1)), "--thresholds")};
  Validate(t);
  return t;
}

MetricAssertion ParseAssertion(std::string_view text) {
  MetricAssertion a;
  std::size_t pos = text.find(">=");
  if (pos == std::string_view::npos) {
    pos = text.find("<=");
    a.at_least = false;
  }
  if (pos == std::string_view::npos || pos == 0) {
    throw Error(ErrorCode::kUsage,
                "--assert expects METRIC>=VALUE, got '" + std::string(text) +
                    "'");
  }
  a.metric = Trim(text.substr(0, pos));
  a.value = ParseDouble(Trim(text.substr(pos + 2)), "--assert");
  return a;
}

RunConfig ApplyConfigJson(std::string_view json_text, RunConfig base,
                          const std::string& source) {
  json root;
  try {
    root = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, source + ": invalid config JSON: " + e.what());
  }
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::kSchema, source + ": " + why);
  };
  if (!root.is_object()) fail("config must be a JSON object");
  auto number = [&](const json& v, const std::string& key) {
    if (!v.is_number()) fail("'" + key + "' must be a number");
    return v.get<double>();
  };
  for (const auto& [key, value] : root.items()) {
    if (key == "postprocess") {
      if (!value.is_object()) fail("'postprocess' must be an object");
      for (const auto& [k, v] : value.items()) {
        if (k == "conf_threshold") {
          base.postprocess.conf_threshold = number(v, k);
        } else if (k == "nms_iou_threshold") {
          base.postprocess.nms_iou_threshold = number(v, k);
        } else {
          fail("unknown key 'postprocess." + k + "'");
        }
      }
    } else if (key == "bin_thresholds") {
      if (value.is_string()) {
        base.bin_thresholds = ParseThresholds(value.get<std::string>());
      } else if (value.is_array() && value.size() == 2) {
        base.bin_thresholds = {number(value[0], key), number(value[1], key)};
      } else if (value.is_object()) {
        for (const auto& [k, v] : value.items()) {
          if (k == "thin_max") {
            base.bin_thresholds.thin_max = number(v, k);
          } else if (k == "medium_max") {
            base.bin_thresholds.medium_max = number(v, k);
          } else {
            fail("unknown key 'bin_thresholds." + k + "'");
          }
        }
      } else {
        fail("'bin_thresholds' must be an object, [thin, medium] or \"thin,medium\"");
      }
    } else if (key == "iou_main") {
      base.iou_main = number(value, key);
    } else if (key == "strict_parsing") {
      if (!value.is_boolean()) fail("'strict_parsing' must be a boolean");
      base.strict_parsing = value.get<bool>();
    } else if (key == "output_path") {
      if (!value.is_string()) fail("'output_path' must be a string");
      base.output_path = value.get<std::string>();
    } else if (key == "apply_postprocess") {
      if (!value.is_boolean()) fail("'apply_postprocess' must be a boolean");
      base.apply_postprocess = value.get<bool>();
    } else if (key == "ap_mode") {
      if (!value.is_string()) fail("'ap_mode' must be a string");
      auto mode = ParseApMode(value.get<std::string>());
      if (!mode) fail("unknown ap_mode '" + value.get<std::string>() + "'");
      base.ap_mode = *mode;
    } else if (key == "jobs") {
      if (!value.is_number_unsigned()) fail("'jobs' must be a non-negative integer");
      base.jobs = value.get<unsigned>();
    } else {
      fail("unknown config key '" + key + "'");
    }
  }
  Validate(base.postprocess);
  Validate(base.bin_thresholds);
  return base;
}

namespace {

// Flags shared by all subcommands, bound before parsing.
struct CommonFlags {
  std::string config;
  std::string out;
  bool json = false;
  bool strict = true;
  bool no_timestamp = false;
  unsigned jobs = 1;

  CLI::Option* config_opt = nullptr;
  CLI::Option* out_opt = nullptr;
  CLI::Option* strict_opt = nullptr;
  CLI::Option* jobs_opt = nullptr;
};

void AddCommonFlags(CLI::App* sub, CommonFlags& f) {
  f.config_opt = sub->add_option(
      "--config", f.config,
      "JSON config file (default: $LOGGAUGE_CONFIG when set)");
  f.out_opt = sub->add_option("--out", f.out, "Write output here instead of stdout");
  sub->add_flag("--json", f.json, "Emit machine-readable JSON");
  f.strict_opt = sub->add_flag(
      "--strict,!--lenient", f.strict,
      "Reject (strict, default) or skip with a warning (lenient) unknown "
      "detection fields and metadata lines");
  sub->add_flag("--no-timestamp", f.no_timestamp,
                "Omit the timestamp field from reports");
  f.jobs_opt = sub->add_option("--jobs", f.jobs,
                               "Worker threads for per-image work (0 = all cores)")
                   ->capture_default_str();
}

// Flags that feed RunConfig; only those given on the command line override.
struct EvalFlags {
  double iou = 0.5;
  double conf = 0.25;
  double nms_iou = 0.45;
  std::string thresholds = "30,60";
  std::string ap_mode = "interp101";
  bool postprocess = false;
  bool iou_range = false;
  std::vector<std::string> asserts;

  CLI::Option* iou_opt = nullptr;
  CLI::Option* conf_opt = nullptr;
  CLI::Option* nms_iou_opt = nullptr;
  CLI::Option* thresholds_opt = nullptr;
  CLI::Option* ap_mode_opt = nullptr;
  CLI::Option* postprocess_opt = nullptr;
};

void AddIouFlag(CLI::App* sub, EvalFlags& f) {
  f.iou_opt = sub->add_option("--iou", f.iou, "Main IoU matching threshold")
                  ->capture_default_str();
}
void AddPostprocessFlags(CLI::App* sub, EvalFlags& f) {
  f.conf_opt = sub->add_option("--conf", f.conf, "Confidence threshold")
                   ->capture_default_str();
  f.nms_iou_opt =
      sub->add_option("--nms-iou", f.nms_iou, "NMS IoU suppression threshold")
          ->capture_default_str();
}
void AddThresholdsFlag(CLI::App* sub, EvalFlags& f) {
  f.thresholds_opt =
      sub->add_option("--thresholds", f.thresholds,
                      "Diameter bin thresholds THIN_MAX,MEDIUM_MAX in pixels")
          ->capture_default_str();
}

RunConfig ResolveConfig(const CommonFlags& c, const EvalFlags& e) {
  RunConfig cfg;
  std::string config_path;
  if (c.config_opt->count() > 0) {
    config_path = c.config;
  } else if (const char* env = std::getenv("LOGGAUGE_CONFIG");
             env != nullptr && *env != '\0') {
    config_path = env;
  }
  if (!config_path.empty()) {
    cfg = ApplyConfigJson(ReadTextFile(config_path), cfg, config_path);
  }
  if (c.out_opt->count() > 0) cfg.output_path = c.out;
  if (c.strict_opt->count() > 0) cfg.strict_parsing = c.strict;
  if (c.jobs_opt->count() > 0) cfg.jobs = c.jobs;
  if (cfg.jobs == 0) cfg.jobs = std::max(1u, std::thread::hardware_concurrency());
  if (e.iou_opt && e.iou_opt->count() > 0) cfg.iou_main = e.iou;
  if (e.conf_opt && e.conf_opt->count() > 0) cfg.postprocess.conf_threshold = e.conf;
  if (e.nms_iou_opt && e.nms_iou_opt->count() > 0) {
    cfg.postprocess.nms_iou_threshold = e.nms_iou;
  }
  if (e.thresholds_opt && e.thresholds_opt->count() > 0) {
    cfg.bin_thresholds = ParseThresholds(e.thresholds);
  }
  if (e.ap_mode_opt && e.ap_mode_opt->count() > 0) {
    auto mode = ParseApMode(e.ap_mode);
    if (!mode) throw Error(ErrorCode::kUsage, "unknown --ap-mode '" + e.ap_mode + "'");
    cfg.ap_mode = *mode;
  }
  if (e.postprocess_opt && e.postprocess_opt->count() > 0) {
    cfg.apply_postprocess = e.postprocess;
  }
  if (!(cfg.iou_main > 0.0 && cfg.iou_main <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "IoU threshold must be in (0, 1]");
  }
  Validate(cfg.postprocess);
  Validate(cfg.bin_thresholds);
  return cfg;
}

// Help for the innermost subcommand on the command line, else the top level.
std::string HelpFor(const CLI::App& app) {
  const auto subs = app.get_subcommands();
  return subs.empty() ? app.help() : subs.front()->help();
}

void Emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.output_path) {
    WriteTextFile(*cfg.output_path, text);
  } else {
    out << text;
  }
}

std::optional<std::string> Timestamp(const CommonFlags& c) {
  if (c.no_timestamp) return std::nullopt;
  return UtcTimestamp();
}

std::vector<Detection> LoadDetections(const std::string& path,
                                      const RunConfig& cfg, std::ostream& err) {
  std::vector<std::string> warnings;
  auto dets = ParseDetections(
      ReadTextFile(path),
      cfg.strict_parsing ? ParseMode::kStrict : ParseMode::kLenient, &warnings,
      path);
  for (const auto& w : warnings) err << "warning: " << w << "\n";
  return dets;
}

std::optional<double> MetricValue(const EvalReport& r, const std::string& name) {
  if (name == "precision") return r.precision;
  if (name == "recall") return r.recall;
  if (name == "f1") return r.f1;
  if (name == "map50") return r.map50;
  if (name == "map5095") return r.map5095;
  if (name == "ap_iou_main") return r.ap_iou_main;
  if (name == "bin_accuracy") return r.bin_report.bin_accuracy;
  throw Error(ErrorCode::kUsage, "--assert: unknown metric '" + name + "'");
}

// ---------------------------------------------------------------------------
// Subcommands

int CmdStats(const std::string& input, const CommonFlags& c,
             const RunConfig& cfg, std::ostream& out) {
  const DatasetStats stats = ComputeStats(LoadDatasetFile(input));
  Emit(cfg, out, c.json ? StatsToJson(stats, Timestamp(c)) : StatsToTable(stats));
  return kExitOk;
}

int CmdEval(const std::string& manifest, const std::string& detections,
            const CommonFlags& c, const EvalFlags& e, const RunConfig& cfg,
            std::ostream& out, std::ostream& err) {
  std::vector<MetricAssertion> asserts;
  for (const auto& a : e.asserts) asserts.push_back(ParseAssertion(a));

  const Dataset dataset = LoadDatasetFile(manifest);
  const auto dets = LoadDetections(detections, cfg, err);
  EvalOptions options;
  options.params = cfg.postprocess;
  options.apply_postprocess = cfg.apply_postprocess;
  options.bin_thresholds = cfg.bin_thresholds;
  options.iou_main = cfg.iou_main;
  options.ap_mode = cfg.ap_mode;
  options.workers = cfg.jobs;
  options.per_iou_summary = e.iou_range;
  const EvalReport report = Evaluate(dataset, dets, options);
  Emit(cfg, out, EvalReportToJson(report, Timestamp(c)));

  int status = kExitOk;
  for (const MetricAssertion& a : asserts) {
    const auto value = MetricValue(report, a.metric);
    const bool ok = value && (a.at_least ? *value >= a.value : *value <= a.value);
    if (!ok) {
      err << "assertion failed: " << a.metric << " = "
          << (value ? std::to_string(*value) : std::string("undefined"))
          << (a.at_least ? ", required >= " : ", required <= ") << a.value
          << "\n";
      status = kExitAssertion;
    }
  }
  return status;
}

int CmdBin(const std::string& manifest, const std::string& detections,
           const CommonFlags& c, const RunConfig& cfg, std::ostream& out,
           std::ostream& err) {
  const Dataset dataset = LoadDatasetFile(manifest);
  const auto dets = LoadDetections(detections, cfg, err);
  const auto binned = BinDetections(dets, dataset.manifest, cfg.bin_thresholds);
  const BinHistogram histogram = Histogram(binned);

  std::optional<BinReport> confusion;
  if (dataset.num_instances() > 0) {
    std::vector<std::vector<Detection>> per_image(dataset.manifest.size());
    for (const Detection& d : dets) {
      per_image[*dataset.manifest.IndexOf(d.image_id)].push_back(d);
    }
    std::vector<MatchedPair> pairs;
    for (std::size_t i = 0; i < per_image.size(); ++i) {
      const MatchSet set =
          MatchImage(dataset.ground_truth[i], per_image[i],
                     dataset.manifest.entries()[i].dims, cfg.iou_main);
      pairs.insert(pairs.end(), set.pairs.begin(), set.pairs.end());
    }
    confusion = BinConfusionReport(pairs, dataset.manifest, cfg.bin_thresholds);
  }
  Emit(cfg, out,
       c.json ? BinReportToJson(histogram, confusion, cfg.bin_thresholds,
                                Timestamp(c))
              : BinReportToTable(histogram, confusion));
  return kExitOk;
}

int CmdNms(const std::string& detections, const std::string& manifest,
           const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Dataset dataset = LoadDatasetFile(manifest);
  const auto dets = LoadDetections(detections, cfg, err);
  Emit(cfg, out,
       WriteDetections(Postprocess(dets, dataset.manifest, cfg.postprocess)));
  return kExitOk;
}

void WriteYoloTree(const Dataset& dataset, const fs::path& out_dir,
                   const fs::path& manifest_path) {
  std::vector<ManifestEntry> entries;
  const auto& src = dataset.manifest.entries();
  for (std::size_t i = 0; i < src.size(); ++i) {
    ManifestEntry e = src[i];
    e.gt_path = fs::absolute(out_dir / (e.image_id + ".txt"));
    if (e.image_path) e.image_path = fs::absolute(*e.image_path);
    WriteTextFile(e.gt_path, WriteYoloGt(dataset.ground_truth[i]));
    entries.push_back(std::move(e));
  }
  const fs::path manifest_abs = fs::absolute(manifest_path);
  WriteTextFile(manifest_abs,
                WriteManifest(DatasetManifest(std::move(entries)),
                              manifest_abs.parent_path()));
}

int CmdConvert(const std::string& input, const std::string& from,
               const std::string& to, const std::string& manifest_out,
               const RunConfig& cfg, std::ostream& out) {
  Dataset dataset;
  if (from == "coco") {
    dataset = ParseCocoDataset(ReadTextFile(input), input);
    // COCO file names are relative to the annotation file.
    std::vector<ManifestEntry> entries = dataset.manifest.entries();
    for (ManifestEntry& e : entries) {
      if (e.image_path) e.image_path = fs::path(input).parent_path() / *e.image_path;
    }
    dataset.manifest = DatasetManifest(std::move(entries));
  } else {
    dataset = LoadYoloDataset(
        LoadManifest(ReadTextFile(input), fs::path(input).parent_path(), input));
  }

  if (to == "coco") {
    Emit(cfg, out, WriteCocoDataset(dataset));
    return kExitOk;
  }
  if (!cfg.output_path) {
    throw Error(ErrorCode::kUsage, "convert --to yolo needs --out DIR");
  }
  const fs::path out_dir = *cfg.output_path;
  const fs::path manifest_path =
      manifest_out.empty() ? out_dir / "manifest.json" : fs::path(manifest_out);
  WriteYoloTree(dataset, out_dir, manifest_path);
  return kExitOk;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Timber log detection toolkit: dataset statistics, annotation "
               "conversion, NMS, diameter binning and detection evaluation.",
               "loggauge"};
  app.require_subcommand(1);
  app.fallthrough(false);

  // Each subcommand binds its own flag storage so option handles stay
  // distinct.
  CommonFlags stats_c, eval_c, bin_c, nms_c, convert_c;
  EvalFlags eval_flags, bin_flags, nms_flags, no_flags;
  std::string in1;
  std::string in2;
  std::string from;
  std::string to;
  std::string manifest_out;

  CLI::App* stats = app.add_subcommand("stats", "Dataset statistics table");
  stats->add_option("dataset", in1, "Manifest JSON array or COCO JSON")->required();
  AddCommonFlags(stats, stats_c);

  CLI::App* eval = app.add_subcommand("eval", "Evaluate detections against ground truth");
  eval->add_option("dataset", in1, "Manifest JSON array or COCO JSON")->required();
  eval->add_option("detections", in2, "Line-delimited JSON detections")->required();
  AddCommonFlags(eval, eval_c);
  AddIouFlag(eval, eval_flags);
  eval->add_flag("--iou-range", eval_flags.iou_range,
                 "Add a per-threshold precision/recall/F1 summary for IoU "
                 "0.50:0.05:0.95");
  AddPostprocessFlags(eval, eval_flags);
  eval_flags.postprocess_opt = eval->add_flag(
      "--postprocess", eval_flags.postprocess,
      "Apply the confidence filter and NMS before evaluating");
  AddThresholdsFlag(eval, eval_flags);
  eval_flags.ap_mode_opt =
      eval->add_option("--ap-mode", eval_flags.ap_mode,
                       "AP interpolation: interp101 or all-point")
          ->capture_default_str();
  eval->add_option("--assert", eval_flags.asserts,
                   "METRIC>=VALUE floor (repeatable); exit 1 when missed. "
                   "Metrics: precision recall f1 map50 map5095 ap_iou_main "
                   "bin_accuracy")
      ->allow_extra_args(false);

  CLI::App* bin = app.add_subcommand("bin", "Diameter bin histogram and confusion");
  bin->add_option("dataset", in1, "Manifest JSON array or COCO JSON")->required();
  bin->add_option("detections", in2, "Line-delimited JSON detections")->required();
  AddCommonFlags(bin, bin_c);
  AddThresholdsFlag(bin, bin_flags);
  AddIouFlag(bin, bin_flags);

  CLI::App* nms = app.add_subcommand("nms", "Confidence filter and greedy NMS");
  nms->add_option("detections", in1, "Line-delimited JSON detections")->required();
  nms->add_option("dataset", in2, "Manifest JSON array or COCO JSON")->required();
  AddCommonFlags(nms, nms_c);
  AddPostprocessFlags(nms, nms_flags);

  CLI::App* convert = app.add_subcommand("convert", "Convert annotations between COCO and YOLO");
  convert->add_option("input", in1,
                      "COCO JSON (--from coco) or manifest JSON (--from yolo)")
      ->required();
  convert->add_option("--from", from, "Input format")
      ->required()
      ->check(CLI::IsMember({"coco", "yolo"}));
  convert->add_option("--to", to, "Output format")
      ->required()
      ->check(CLI::IsMember({"coco", "yolo"}));
  convert->add_option("--manifest", manifest_out,
                      "Manifest to write for --to yolo (default OUT/manifest.json)");
  AddCommonFlags(convert, convert_c);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << HelpFor(app);
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << HelpFor(app);
    return kExitInput;
  }

  try {
    if (stats->parsed()) {
      return CmdStats(in1, stats_c, ResolveConfig(stats_c, no_flags), out);
    }
    if (eval->parsed()) {
      return CmdEval(in1, in2, eval_c, eval_flags,
                     ResolveConfig(eval_c, eval_flags), out, err);
    }
    if (bin->parsed()) {
      return CmdBin(in1, in2, bin_c, ResolveConfig(bin_c, bin_flags), out, err);
    }
    if (nms->parsed()) {
      return CmdNms(in1, in2, ResolveConfig(nms_c, nms_flags), out, err);
    }
    if (convert->parsed()) {
      return CmdConvert(in1, from, to, manifest_out,
                        ResolveConfig(convert_c, no_flags), out);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  err << app.help();
  return kExitInput;
}

}  // namespace loggauge::cli
