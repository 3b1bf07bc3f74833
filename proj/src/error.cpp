// Copyright 2026 The vectx Authors
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

#include "vectx/error.hpp"

#include <fmt/format.h>

namespace vectx {

std::string_view category_name(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kParse: return "parse";
    case ErrorCategory::kType: return "type";
    case ErrorCategory::kDerivation: return "derivation";
    case ErrorCategory::kVerification: return "verification";
    case ErrorCategory::kIo: return "io";
  }
  return "unknown";
}

ParseError::ParseError(const std::string &msg, std::size_t line, std::size_t column)
    : Error(ErrorCategory::kParse, "ParseError",
            line == 0 ? fmt::format("column {}: {}", column, msg)
                      : fmt::format("line {}, column {}: {}", line, column, msg)),
      line_(line),
      column_(column) {}

}  // namespace vectx
