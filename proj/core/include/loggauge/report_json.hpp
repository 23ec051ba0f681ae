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

#include <optional>
#include <span>
#include <string>

#include "loggauge/binning.hpp"
#include "loggauge/dataset_stats.hpp"
#include "loggauge/metrics.hpp"

namespace loggauge {

// Pretty JSON (two-space indent, trailing newline). The timestamp field is
// emitted only when given.
std::string EvalReportToJson(const EvalReport& report,
                             const std::optional<std::string>& timestamp = {});

std::string BinReportToJson(const BinHistogram& histogram,
                            const std::optional<BinReport>& confusion,
                            const BinThresholds& thresholds,
                            const std::optional<std::string>& timestamp = {});

std::string StatsToJson(const DatasetStats& stats,
                        const std::optional<std::string>& timestamp = {});

// Two-column attribute/value table mirroring the dataset overview table.
std::string StatsToTable(const DatasetStats& stats);

std::string BinReportToTable(const BinHistogram& histogram,
                             const std::optional<BinReport>& confusion);

// Current UTC time as ISO-8601, e.g. 2026-01-31T12:00:00Z.
std::string UtcTimestamp();

}  // namespace loggauge
