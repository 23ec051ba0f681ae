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

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "loggauge/binning.hpp"
#include "loggauge/metrics.hpp"
#include "loggauge/postprocess.hpp"

namespace loggauge::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitAssertion = 1;
inline constexpr int kExitInput = 2;

// Settings shared by every subcommand. Precedence: built-in defaults, then
// the config file ($LOGGAUGE_CONFIG or --config), then flags.
struct RunConfig {
  PostprocessParams postprocess;
  BinThresholds bin_thresholds;
  double iou_main = 0.5;
  bool strict_parsing = true;
  std::optional<std::filesystem::path> output_path;
  bool apply_postprocess = false;
  ApMode ap_mode = ApMode::kInterp101;
  unsigned jobs = 1;
};

// Applies the keys present in a JSON config object on top of `base`.
// Unknown keys are rejected.
RunConfig ApplyConfigJson(std::string_view json_text, RunConfig base,
                          const std::string& source = "");

// "30,60" -> {30, 60}.
BinThresholds ParseThresholds(std::string_view text);

struct MetricAssertion {
  std::string metric;
  bool at_least = true;  // ">=" when true, "<=" otherwise
  double value = 0.0;
};

// "map50>=0.5" or "recall<=0.9".
MetricAssertion ParseAssertion(std::string_view text);

// Runs the CLI with argv-style arguments (args[0] is the program name).
// Returns 0 on success, 1 when an --assert floor is missed and 2 for any
// input or usage error.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace loggauge::cli
