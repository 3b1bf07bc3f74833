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

#include "vectx/value.hpp"

#include <fmt/format.h>

#include <cassert>
#include <utility>

#include "parsing.hpp"
#include "vectx/error.hpp"

namespace vectx {

Value Value::scalar(std::int64_t x) {
  Value v;
  v.kind_ = Kind::kScalar;
  v.scalar_ = x;
  return v;
}

Value Value::vector(std::vector<Value> items) {
  Value v;
  v.kind_ = Kind::kVector;
  v.items_ = std::move(items);
  return v;
}

Value Value::tuple(Value first, Value second) {
  Value v;
  v.kind_ = Kind::kTuple;
  v.items_.reserve(2);
  v.items_.push_back(std::move(first));
  v.items_.push_back(std::move(second));
  return v;
}

std::int64_t Value::as_int() const {
  if (!is_scalar()) throw ShapeError("expected a scalar, got " + print_value(*this));
  return scalar_;
}

const Value &Value::first() const {
  if (!is_tuple()) throw ShapeError("expected a tuple, got " + print_value(*this));
  return items_[0];
}

const Value &Value::second() const {
  if (!is_tuple()) throw ShapeError("expected a tuple, got " + print_value(*this));
  return items_[1];
}

namespace detail {

Value parse_value_at(Cursor &cur) {
  if (cur.consume('[')) {
    std::vector<Value> items;
    if (!cur.consume(']')) {
      do {
        items.push_back(parse_value_at(cur));
      } while (cur.consume(','));
      cur.expect(']');
    }
    return Value::vector(std::move(items));
  }
  if (cur.consume('(')) {
    Value first = parse_value_at(cur);
    cur.expect(',');
    Value second = parse_value_at(cur);
    cur.expect(')');
    return Value::tuple(std::move(first), std::move(second));
  }
  return Value::scalar(cur.integer());
}

}  // namespace detail

Value parse_value(std::string_view text) {
  detail::Cursor cur(text);
  Value v = detail::parse_value_at(cur);
  if (!cur.at_end()) cur.fail("unexpected trailing input");
  return v;
}

std::string print_value(const Value &v) {
  switch (v.kind()) {
    case Value::Kind::kScalar:
      return std::to_string(v.as_int());
    case Value::Kind::kTuple:
      return fmt::format("({},{})", print_value(v.first()), print_value(v.second()));
    case Value::Kind::kVector: {
      std::string out = "[";
      for (std::size_t i = 0; i < v.length(); ++i) {
        if (i != 0) out += ',';
        out += print_value(v.items()[i]);
      }
      out += ']';
      return out;
    }
  }
  return {};
}

bool matches(const Value &v, const VecType &t) {
  switch (t.kind()) {
    case VecType::Kind::kAtom:
      return v.is_scalar();
    case VecType::Kind::kTuple:
      return v.is_tuple() && matches(v.first(), t.first()) && matches(v.second(), t.second());
    case VecType::Kind::kVec:
      if (!v.is_vector() || v.length() != t.size()) return false;
      for (const Value &item : v.items()) {
        if (!matches(item, t.element())) return false;
      }
      return true;
  }
  return false;
}

VecType shape_of(const Value &v, std::string_view atom) {
  switch (v.kind()) {
    case Value::Kind::kScalar:
      return VecType::atom(std::string(atom));
    case Value::Kind::kTuple:
      return VecType::tuple(shape_of(v.first(), atom), shape_of(v.second(), atom));
    case Value::Kind::kVector: {
      if (v.length() == 0) throw ShapeError("empty vectors have no shape");
      VecType element = shape_of(v.items()[0], atom);
      for (std::size_t i = 1; i < v.length(); ++i) {
        if (shape_of(v.items()[i], atom) != element) {
          throw ShapeError(fmt::format("ragged vector {}", print_value(v)));
        }
      }
      return VecType::vec(v.length(), element);
    }
  }
  return VecType::atom(std::string(atom));
}

namespace {

void collect_leaves(const Value &v, std::vector<Value> &out) {
  if (!v.is_vector()) {
    out.push_back(v);
    return;
  }
  for (const Value &item : v.items()) collect_leaves(item, out);
}

}  // namespace

std::vector<Value> leaves(const Value &v) {
  std::vector<Value> out;
  collect_leaves(v, out);
  return out;
}

Value flatten(const Value &v) { return Value::vector(leaves(v)); }

}  // namespace vectx
