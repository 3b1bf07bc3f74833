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

#ifndef VECTX_VALUE_HPP
#define VECTX_VALUE_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "vectx/type_algebra.hpp"

namespace vectx {

// Runtime data: 64-bit integers, vectors and pairs.
class Value {
 public:
  enum class Kind { kScalar, kVector, kTuple };

  Value() = default;
  static Value scalar(std::int64_t x);
  static Value vector(std::vector<Value> items);
  static Value tuple(Value first, Value second);

  Kind kind() const { return kind_; }
  bool is_scalar() const { return kind_ == Kind::kScalar; }
  bool is_vector() const { return kind_ == Kind::kVector; }
  bool is_tuple() const { return kind_ == Kind::kTuple; }

  std::int64_t as_int() const;
  // Vector elements; for a tuple, its two components.
  const std::vector<Value> &items() const { return items_; }
  std::size_t length() const { return items_.size(); }
  const Value &first() const;
  const Value &second() const;

  friend bool operator==(const Value &, const Value &) = default;

 private:
  Kind kind_ = Kind::kScalar;
  std::int64_t scalar_ = 0;
  std::vector<Value> items_;
};

// `[1,2,3]`, `(1,[2,3])`, `-4`. Whitespace is allowed between tokens.
Value parse_value(std::string_view text);
// Canonical form without whitespace.
std::string print_value(const Value &v);

// Structural check: scalars inhabit any atom, vectors need the exact size.
bool matches(const Value &v, const VecType &t);

// The type of a well-formed value, with every scalar typed as `atom`.
// Throws ShapeError for empty or ragged vectors.
VecType shape_of(const Value &v, std::string_view atom = "int");

// Left-to-right sequence of non-vector leaves (scalars and tuples).
std::vector<Value> leaves(const Value &v);
// `leaves` packed into a single flat vector.
Value flatten(const Value &v);

}  // namespace vectx

#endif  // VECTX_VALUE_HPP
