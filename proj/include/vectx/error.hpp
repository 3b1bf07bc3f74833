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

#ifndef VECTX_ERROR_HPP
#define VECTX_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace vectx {

// Broad error family. The CLI maps each family onto its exit code.
enum class ErrorCategory {
  kParse,
  kType,
  kDerivation,
  kVerification,
  kIo,
};

std::string_view category_name(ErrorCategory category);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, std::string kind, const std::string &msg)
      : std::runtime_error(msg), category_(category), kind_(std::move(kind)) {}

  ErrorCategory category() const { return category_; }
  // Specific error name, e.g. "DivisibilityError".
  const std::string &kind() const { return kind_; }

 private:
  ErrorCategory category_;
  std::string kind_;
};

#define VECTX_DEFINE_ERROR(Name, Category)                 \
  class Name : public Error {                              \
   public:                                                 \
    explicit Name(const std::string &msg)                  \
        : Error(ErrorCategory::Category, #Name, msg) {}    \
  }

// Type algebra and typing failures.
VECTX_DEFINE_ERROR(DimensionError, kType);
VECTX_DEFINE_ERROR(DivisibilityError, kType);
VECTX_DEFINE_ERROR(ShapeError, kType);
VECTX_DEFINE_ERROR(TypeMismatchError, kType);
VECTX_DEFINE_ERROR(SizeMismatchError, kType);
VECTX_DEFINE_ERROR(AtomMismatchError, kType);
VECTX_DEFINE_ERROR(TypeError, kType);
VECTX_DEFINE_ERROR(LengthMismatchError, kType);

VECTX_DEFINE_ERROR(DerivationError, kDerivation);
VECTX_DEFINE_ERROR(EmptySearchSpaceError, kDerivation);
VECTX_DEFINE_ERROR(MissingPrimitiveError, kVerification);
VECTX_DEFINE_ERROR(VerificationFailure, kVerification);
VECTX_DEFINE_ERROR(IoError, kIo);

#undef VECTX_DEFINE_ERROR

// Malformed text. Line is 0 for single-line inputs; column is 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string &msg, std::size_t line, std::size_t column);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace vectx

#endif  // VECTX_ERROR_HPP
