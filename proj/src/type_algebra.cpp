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

#include "vectx/type_algebra.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cassert>
#include <utility>

#include "parsing.hpp"
#include "vectx/error.hpp"

namespace vectx {

struct VecType::Node {
  Kind kind;
  std::string name;
  std::size_t size = 0;
  std::vector<VecType> children;
};

VecType::VecType() : node_(std::make_shared<const Node>(Node{Kind::kAtom, "_", 0, {}})) {}

VecType VecType::atom(std::string name) {
  return VecType(std::make_shared<const Node>(Node{Kind::kAtom, std::move(name), 0, {}}));
}

VecType VecType::vec(std::size_t size, VecType element) {
  if (size == 0) throw DimensionError("vector sizes must be at least 1");
  return VecType(
      std::make_shared<const Node>(Node{Kind::kVec, {}, size, {std::move(element)}}));
}

VecType VecType::tuple(VecType first, VecType second) {
  return VecType(std::make_shared<const Node>(
      Node{Kind::kTuple, {}, 0, {std::move(first), std::move(second)}}));
}

VecType::Kind VecType::kind() const { return node_->kind; }

const std::string &VecType::name() const {
  assert(is_atom());
  return node_->name;
}

std::size_t VecType::size() const {
  assert(is_vec());
  return node_->size;
}

const VecType &VecType::element() const {
  assert(is_vec());
  return node_->children[0];
}

const VecType &VecType::first() const {
  assert(is_tuple());
  return node_->children[0];
}

const VecType &VecType::second() const {
  assert(is_tuple());
  return node_->children[1];
}

std::size_t VecType::depth() const {
  std::size_t d = 0;
  for (const VecType *t = this; t->is_vec(); t = &t->element()) ++d;
  return d;
}

const VecType &VecType::leaf() const {
  const VecType *t = this;
  while (t->is_vec()) t = &t->element();
  return *t;
}

bool operator==(const VecType &lhs, const VecType &rhs) {
  if (lhs.node_ == rhs.node_) return true;
  if (lhs.kind() != rhs.kind()) return false;
  switch (lhs.kind()) {
    case VecType::Kind::kAtom:
      return lhs.name() == rhs.name();
    case VecType::Kind::kVec:
      return lhs.size() == rhs.size() && lhs.element() == rhs.element();
    case VecType::Kind::kTuple:
      return lhs.first() == rhs.first() && lhs.second() == rhs.second();
  }
  return false;
}

std::size_t total_size(const VecType &t) {
  std::size_t n = 1;
  for (const VecType *cur = &t; cur->is_vec(); cur = &cur->element()) n *= cur->size();
  return n;
}

std::vector<std::size_t> dimensions(const VecType &t) {
  std::vector<std::size_t> dims;
  for (const VecType *cur = &t; cur->is_vec(); cur = &cur->element()) {
    dims.push_back(cur->size());
  }
  std::reverse(dims.begin(), dims.end());
  return dims;
}

VecType with_dimensions(const VecType &leaf, const std::vector<std::size_t> &dims) {
  VecType t = leaf;
  for (std::size_t d : dims) t = VecType::vec(d, t);
  return t;
}

TypeOp TypeOp::map(const TypeTransform &f) { return {Kind::kM, 0, f.ops()}; }
TypeOp TypeOp::reshape(std::size_t m) { return {Kind::kR, m, {}}; }
TypeOp TypeOp::reshape_inv(std::size_t m) { return {Kind::kRInv, m, {}}; }
TypeOp TypeOp::vector(std::size_t k) { return {Kind::kV, k, {}}; }
TypeOp TypeOp::vector_inv(std::size_t k) { return {Kind::kVInv, k, {}}; }
TypeTransform TypeOp::mapped() const { return TypeTransform(inner); }

TypeTransform compose(const TypeTransform &outer, const TypeTransform &inner) {
  std::vector<TypeOp> ops = outer.ops();
  ops.insert(ops.end(), inner.ops().begin(), inner.ops().end());
  return TypeTransform(std::move(ops));
}

namespace {

std::string op_label(const TypeOp &op) {
  return print_transform(TypeTransform({op}));
}

VecType apply_op_in(const TypeOp &op, const VecType &t, const std::string &where);

VecType apply_transform_in(const TypeTransform &tr, const VecType &t,
                           const std::string &where) {
  VecType cur = t;
  const auto &ops = tr.ops();
  for (std::size_t i = ops.size(); i-- > 0;) {
    cur = apply_op_in(ops[i], cur,
                      fmt::format("{}op {} ({})", where, i, op_label(ops[i])));
  }
  return cur;
}

VecType apply_op_in(const TypeOp &op, const VecType &t, const std::string &where) {
  auto context = [&](const std::string &msg) {
    return where.empty() ? msg : fmt::format("{}: {}", where, msg);
  };
  switch (op.kind) {
    case TypeOp::Kind::kS:
      return VecType::vec(1, t);
    case TypeOp::Kind::kSInv:
      if (!t.is_vec() || t.size() != 1) {
        throw DimensionError(
            context(fmt::format("S^-1 needs a size-1 vector, got {}", print_type(t))));
      }
      return t.element();
    case TypeOp::Kind::kM:
      if (!t.is_vec()) return t;
      return VecType::vec(t.size(), apply_transform_in(op.mapped(), t.element(),
                                                       where.empty() ? "M: " : where + " / M: "));
    case TypeOp::Kind::kR:
    case TypeOp::Kind::kRInv: {
      if (!t.is_vec()) return t;
      const bool forward = op.kind == TypeOp::Kind::kR;
      if (!t.element().is_vec()) {
        throw ShapeError(context(fmt::format("{} needs a 2-D vector, got {}",
                                             forward ? "R" : "R^-1", print_type(t))));
      }
      const std::size_t outer = t.size();
      const std::size_t inner = t.element().size();
      const VecType &e = t.element().element();
      if (forward) {
        if (outer % op.param != 0) {
          throw DivisibilityError(context(fmt::format(
              "R {}: outer size {} is not a multiple of {}", op.param, outer, op.param)));
        }
        return VecType::vec(outer / op.param, VecType::vec(inner * op.param, e));
      }
      if (inner % op.param != 0) {
        throw DivisibilityError(context(fmt::format(
            "R^-1 {}: inner size {} is not a multiple of {}", op.param, inner, op.param)));
      }
      return VecType::vec(outer * op.param, VecType::vec(inner / op.param, e));
    }
    case TypeOp::Kind::kI:
      return t;
    case TypeOp::Kind::kV:
      return VecType::vec(op.param, t);
    case TypeOp::Kind::kVInv:
      if (!t.is_vec() || t.size() != op.param) {
        throw TypeMismatchError(context(
            fmt::format("V^-1 {} needs a vector of size {}, got {}", op.param, op.param,
                        print_type(t))));
      }
      return t.element();
  }
  return t;
}

}  // namespace

VecType apply_op(const TypeOp &op, const VecType &t) { return apply_op_in(op, t, ""); }

VecType apply_transform(const TypeTransform &tr, const VecType &t) {
  return apply_transform_in(tr, t, "");
}

TypeTransform invert_transform(const TypeTransform &tr) {
  std::vector<TypeOp> ops;
  ops.reserve(tr.ops().size());
  for (auto it = tr.ops().rbegin(); it != tr.ops().rend(); ++it) {
    switch (it->kind) {
      case TypeOp::Kind::kS: ops.push_back(TypeOp::singleton_inv()); break;
      case TypeOp::Kind::kSInv: ops.push_back(TypeOp::singleton()); break;
      case TypeOp::Kind::kM:
        ops.push_back(TypeOp::map(invert_transform(it->mapped())));
        break;
      case TypeOp::Kind::kR: ops.push_back(TypeOp::reshape_inv(it->param)); break;
      case TypeOp::Kind::kRInv: ops.push_back(TypeOp::reshape(it->param)); break;
      case TypeOp::Kind::kI: ops.push_back(TypeOp::identity()); break;
      case TypeOp::Kind::kV: ops.push_back(TypeOp::vector_inv(it->param)); break;
      case TypeOp::Kind::kVInv: ops.push_back(TypeOp::vector(it->param)); break;
    }
  }
  return TypeTransform(std::move(ops));
}

Canonical canonicalize(const VecType &t) {
  if (!t.is_vec()) {
    return {TypeTransform({TypeOp::singleton()}), VecType::vec(1, t)};
  }
  // Ops are collected in application order and reversed at the end.
  std::vector<TypeOp> applied;
  VecType cur = t;
  while (cur.element().is_vec()) {
    const TypeOp collapse = TypeOp::reshape_inv(cur.element().size());
    const TypeOp drop = TypeOp::map(TypeTransform({TypeOp::singleton_inv()}));
    cur = apply_op(drop, apply_op(collapse, cur));
    applied.push_back(collapse);
    applied.push_back(drop);
  }
  std::reverse(applied.begin(), applied.end());
  return {TypeTransform(std::move(applied)), cur};
}

TypeTransform path_between(const VecType &from, const VecType &to) {
  if (total_size(from) != total_size(to)) {
    throw SizeMismatchError(fmt::format("total sizes differ: {} has {}, {} has {}",
                                        print_type(from), total_size(from),
                                        print_type(to), total_size(to)));
  }
  if (from.leaf() != to.leaf()) {
    throw AtomMismatchError(fmt::format("element types differ: {} vs {}",
                                        print_type(from.leaf()), print_type(to.leaf())));
  }
  Canonical source = canonicalize(from);
  Canonical target = canonicalize(to);
  return compose(invert_transform(target.transform), source.transform);
}

bool changes_size(const TypeTransform &tr) {
  return std::any_of(tr.ops().begin(), tr.ops().end(), [](const TypeOp &op) {
    return op.kind == TypeOp::Kind::kV || op.kind == TypeOp::Kind::kVInv ||
           (op.kind == TypeOp::Kind::kM && changes_size(op.mapped()));
  });
}

// --- Text forms ---

std::string print_type(const VecType &t) {
  switch (t.kind()) {
    case VecType::Kind::kAtom:
      return t.name();
    case VecType::Kind::kVec:
      return fmt::format("[{}]<{}>", print_type(t.element()), t.size());
    case VecType::Kind::kTuple:
      return fmt::format("({},{})", print_type(t.first()), print_type(t.second()));
  }
  return {};
}

std::string print_transform(const TypeTransform &tr) {
  if (tr.empty()) return "I";
  std::string out;
  for (const TypeOp &op : tr.ops()) {
    if (!out.empty()) out += ' ';
    switch (op.kind) {
      case TypeOp::Kind::kS: out += "S"; break;
      case TypeOp::Kind::kSInv: out += "S^-1"; break;
      case TypeOp::Kind::kM: out += "M ( " + print_transform(op.mapped()) + " )"; break;
      case TypeOp::Kind::kR: out += fmt::format("R {}", op.param); break;
      case TypeOp::Kind::kRInv: out += fmt::format("R^-1 {}", op.param); break;
      case TypeOp::Kind::kI: out += "I"; break;
      case TypeOp::Kind::kV: out += fmt::format("V {}", op.param); break;
      case TypeOp::Kind::kVInv: out += fmt::format("V^-1 {}", op.param); break;
    }
  }
  return out;
}

namespace detail {

VecType parse_type_at(Cursor &cur) {
  if (cur.consume('[')) {
    VecType inner = parse_type_at(cur);
    cur.expect(']');
    if (cur.peek() != '<') cur.fail("expected '<size>' after ']'");
    while (cur.consume('<')) {
      std::size_t size = cur.positive_int();
      cur.expect('>');
      inner = VecType::vec(size, inner);
    }
    return inner;
  }
  if (cur.consume('(')) {
    VecType first = parse_type_at(cur);
    cur.expect(',');
    VecType second = parse_type_at(cur);
    cur.expect(')');
    return VecType::tuple(std::move(first), std::move(second));
  }
  if (cur.at_identifier()) return VecType::atom(cur.identifier());
  cur.fail("expected a type");
}

TypeTransform parse_transform_at(Cursor &cur) {
  std::vector<TypeOp> ops;
  while (!cur.at_end() && cur.peek() != ')') {
    const std::size_t start = cur.pos();
    std::string word = cur.identifier();
    const bool inverse = cur.consume(std::string_view("^-1"));
    if (word == "S") {
      ops.push_back(inverse ? TypeOp::singleton_inv() : TypeOp::singleton());
    } else if (word == "I" && !inverse) {
      ops.push_back(TypeOp::identity());
    } else if (word == "R") {
      std::size_t m = cur.positive_int();
      ops.push_back(inverse ? TypeOp::reshape_inv(m) : TypeOp::reshape(m));
    } else if (word == "V") {
      std::size_t k = cur.positive_int();
      ops.push_back(inverse ? TypeOp::vector_inv(k) : TypeOp::vector(k));
    } else if (word == "M" && !inverse) {
      cur.expect('(');
      TypeTransform inner = parse_transform_at(cur);
      cur.expect(')');
      ops.push_back(TypeOp::map(inner));
    } else {
      cur.fail_at(start, fmt::format("unknown transform op '{}{}'", word,
                                     inverse ? "^-1" : ""));
    }
  }
  return TypeTransform(std::move(ops));
}

}  // namespace detail

VecType parse_type(std::string_view text) {
  detail::Cursor cur(text);
  VecType t = detail::parse_type_at(cur);
  if (!cur.at_end()) cur.fail("unexpected trailing input");
  return t;
}

TypeTransform parse_transform(std::string_view text) {
  detail::Cursor cur(text);
  TypeTransform tr = detail::parse_transform_at(cur);
  if (!cur.at_end()) cur.fail("unexpected trailing input");
  return tr;
}

}  // namespace vectx
