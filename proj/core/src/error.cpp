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

#include "loggauge/error.hpp"

#include <utility>

namespace loggauge {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedBox:
      return "malformed-box";
    case ErrorCode::kDegenerateBox:
      return "degenerate-box";
    case ErrorCode::kMalformedPolygon:
      return "malformed-polygon";
    case ErrorCode::kParse:
      return "parse";
    case ErrorCode::kSchema:
      return "schema";
    case ErrorCode::kUnknownImage:
      return "unknown-image";
    case ErrorCode::kInvalidArgument:
      return "invalid-argument";
    case ErrorCode::kUsage:
      return "usage";
    case ErrorCode::kIo:
      return "io";
    case ErrorCode::kEmptyInput:
      return "empty-input";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

namespace {

std::string FormatLocation(const std::string& source, std::size_t line,
                           const std::string& reason) {
  std::string out = source.empty() ? std::string("<input>") : source;
  out += ":";
  out += std::to_string(line);
  out += ": ";
  out += reason;
  return out;
}

}  // namespace

ParseError::ParseError(std::string source, std::size_t line,
                       const std::string& reason, ErrorCode code)
    : Error(code, FormatLocation(source, line, reason)),
      source_(std::move(source)),
      line_(line),
      reason_(reason) {}

}  // namespace loggauge
