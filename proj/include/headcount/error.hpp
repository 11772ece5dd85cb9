// Copyright 2026 The headcount Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace headcount {

enum class Errc {
  ParseError,
  UnsupportedFormat,
  EmptySequence,
  TruncatedStream,
  IoError,
  ConfigError,
  ShapeError,
  NotFound,
  DegenerateBlob,
  OrderError,
  UndefinedAccuracy,
  PreconditionViolation,
};

constexpr std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::ParseError: return "parse error";
    case Errc::UnsupportedFormat: return "unsupported format";
    case Errc::EmptySequence: return "empty sequence";
    case Errc::TruncatedStream: return "truncated stream";
    case Errc::IoError: return "i/o error";
    case Errc::ConfigError: return "config error";
    case Errc::ShapeError: return "shape error";
    case Errc::NotFound: return "not found";
    case Errc::DegenerateBlob: return "degenerate blob";
    case Errc::OrderError: return "order error";
    case Errc::UndefinedAccuracy: return "undefined accuracy";
    case Errc::PreconditionViolation: return "precondition violation";
  }
  return "unknown error";
}

/// Single exception type for the library; `code()` tells callers which
/// contract was broken.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& detail) {
  throw Error(code, detail);
}

}  // namespace headcount
