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

#ifndef VECTX_PROGRAM_HPP
#define VECTX_PROGRAM_HPP

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vectx/type_algebra.hpp"
#include "vectx/value.hpp"

namespace vectx {

// `t1 -> t2` for element functions, `b -> t -> b` for fold functions.
struct FnSignature {
  std::vector<VecType> params;
  VecType result;

  bool is_unary() const { return params.size() == 1; }
  bool is_fold() const {
    return params.size() == 2 && params[0] == result;
  }
  friend bool operator==(const FnSignature &, const FnSignature &) = default;
};

struct OpaqueFn;
using FnRef = std::shared_ptr<const OpaqueFn>;

/**
 * How a function is defined.
 *
 *   kOpaque      declared only; derivation can use it, evaluation cannot.
 *   kPrimitive   an entry of the built-in primitive library.
 *   kElementwise f = map h (h is `inner`).
 *   kFoldOf      f = foldl h.
 *   kNarrow      f x = fromVector k (h (toVector k x)).
 *   kNarrowFold  f acc x = h acc (toVector k x).
 *
 * Only kElementwise and kFoldOf are structure annotations that derivation
 * may rely on. The two narrow forms are what derivation emits when it has to
 * lower a function that works on k-vectors to one working on elements.
 */
enum class FnForm { kOpaque, kPrimitive, kElementwise, kFoldOf, kNarrow, kNarrowFold };

struct OpaqueFn {
  std::string name;
  FnSignature signature;
  FnForm form = FnForm::kOpaque;
  std::string primitive;   // kPrimitive
  FnRef inner;             // every other non-opaque form
  std::size_t width = 0;   // k for the narrow forms

  // h when this function is declared as `map h`, else null.
  const OpaqueFn *elementwise_of() const {
    return form == FnForm::kElementwise ? inner.get() : nullptr;
  }
  // h when this function is declared as `foldl h`, else null.
  const OpaqueFn *fold_of() const {
    return form == FnForm::kFoldOf ? inner.get() : nullptr;
  }
};

struct Stage {
  enum class Kind {
    kMap,
    kFold,
    kZip,
    kUnzip,
    kZipt,
    kUnzipt,
    kReshapeTo,
    kReshapeFrom,
    kComposed,
  };

  Kind kind = Kind::kComposed;
  std::string name;
  FnRef fn;                   // kMap, kFold
  Value acc;                  // kFold
  std::size_t width = 0;      // kReshapeTo, kReshapeFrom
  std::vector<Stage> parts;   // kComposed, applied left to right

  static Stage map(std::string name, FnRef f);
  static Stage fold(std::string name, FnRef f, Value acc);
  static Stage zipt(std::string name);
  static Stage unzipt(std::string name);
  static Stage reshape_to(std::string name, std::size_t k);
  static Stage reshape_from(std::string name, std::size_t k);
  static Stage composed(std::string name, std::vector<Stage> parts);
};

struct Binding {
  std::string name;
  VecType type;
};

/**
 * A pipeline program: one input of vector type, stages applied left to
 * right, one result. Functions and stages are kept in declaration order so
 * that printing reproduces the canonical text.
 */
struct Program {
  Binding input;
  std::vector<FnRef> functions;
  std::vector<Stage> stages;           // named stage declarations
  std::vector<std::string> pipeline;   // stage names, first applied first
  std::string result_name = "r";

  const Stage &stage(std::string_view name) const;
  const OpaqueFn *function(std::string_view name) const;
  std::vector<Stage> pipeline_stages() const;
};

struct StageTyping {
  std::string stage;
  VecType input;
  VecType output;
};

struct TypedProgram {
  Program program;
  std::vector<StageTyping> stages;   // one entry per pipeline element
  VecType result;
};

// Output type of `stage` applied to `input`; throws TypeError.
VecType stage_output(const Stage &stage, const VecType &input);

// Checks that every function definition agrees with its signature.
void check_function(const OpaqueFn &f);

TypedProgram typecheck(const Program &p);

Program parse_program(std::string_view text);
std::string print_program(const Program &p);

std::string print_signature(const FnSignature &sig);

// Nesting of map/foldl levels a stage performs (`map f` with f = map h is 2).
std::size_t map_fold_levels(const Stage &stage);

}  // namespace vectx

#endif  // VECTX_PROGRAM_HPP
