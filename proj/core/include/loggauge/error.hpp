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
#include <stdexcept>
#include <string>
#include <string_view>

namespace loggauge {

enum class ErrorCode {
  kMalformedBox,
  kDegenerateBox,
  kMalformedPolygon,
  kParse,
  kSchema,
  kUnknownImage,
  kInvalidArgument,
  kUsage,
  kIo,
  kEmptyInput,
};

std::string_view ErrorCodeName(ErrorCode code);

// Base exception for every failure raised by the library. The CLI maps all of
// these to exit status 2.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// A parse failure tied to a location in the input. `line` is 1-based; for
// JSON documents it is the 1-based record (array element) index instead.
class ParseError : public Error {
 public:
  ParseError(std::string source, std::size_t line, const std::string& reason,
             ErrorCode code = ErrorCode::kParse);

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::string source_;
  std::size_t line_;
  std::string reason_;
};

}  // namespace loggauge
