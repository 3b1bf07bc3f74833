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

#include "vectx/runtime.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cstdint>
#include <utility>

#include "vectx/error.hpp"

namespace vectx {

namespace {

// Two's-complement wrapping arithmetic.
std::int64_t wrap_add(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) + static_cast<std::uint64_t>(b));
}
std::int64_t wrap_mul(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(b));
}

const Value &vector_arg(const Value &v, std::string_view prim) {
  if (!v.is_vector()) {
    throw ShapeError(fmt::format("{} needs a vector, got {}", prim, print_value(v)));
  }
  return v;
}

Value map_scalar(const Value &v, std::int64_t (*f)(std::int64_t)) {
  return Value::scalar(f(v.as_int()));
}

std::int64_t sum_of(const Value &v, std::string_view prim) {
  std::int64_t total = 0;
  for (const Value &x : vector_arg(v, prim).items()) total = wrap_add(total, x.as_int());
  return total;
}

PrimitiveLibrary make_standard() {
  PrimitiveLibrary lib;
  auto unary = [&](std::string name, std::function<Value(const Value &)> f) {
    lib.add({std::move(name), 1, [f](std::span<const Value> a) { return f(a[0]); }});
  };
  auto binary = [&](std::string name, std::function<Value(const Value &, const Value &)> f) {
    lib.add({std::move(name), 2, [f](std::span<const Value> a) { return f(a[0], a[1]); }});
  };
  unary("inc", [](const Value &x) {
    return map_scalar(x, [](std::int64_t n) { return wrap_add(n, 1); });
  });
  unary("triple", [](const Value &x) {
    return map_scalar(x, [](std::int64_t n) { return wrap_mul(n, 3); });
  });
  unary("negate", [](const Value &x) {
    return map_scalar(x, [](std::int64_t n) { return wrap_mul(n, -1); });
  });
  unary("square", [](const Value &x) {
    return map_scalar(x, [](std::int64_t n) { return wrap_mul(n, n); });
  });
  binary("add", [](const Value &acc, const Value &x) {
    return Value::scalar(wrap_add(acc.as_int(), x.as_int()));
  });
  binary("mul", [](const Value &acc, const Value &x) {
    return Value::scalar(wrap_mul(acc.as_int(), x.as_int()));
  });
  binary("max", [](const Value &acc, const Value &x) {
    return Value::scalar(std::max(acc.as_int(), x.as_int()));
  });
  binary("horner", [](const Value &acc, const Value &x) {
    return Value::scalar(wrap_add(wrap_mul(acc.as_int(), 10), x.as_int()));
  });
  unary("sum", [](const Value &v) { return Value::scalar(sum_of(v, "sum")); });
  binary("sumsq", [](const Value &acc, const Value &chunk) {
    const std::int64_t s = sum_of(chunk, "sumsq");
    return Value::scalar(wrap_add(acc.as_int(), wrap_mul(s, s)));
  });
  unary("reverse", [](const Value &v) {
    std::vector<Value> items = vector_arg(v, "reverse").items();
    std::reverse(items.begin(), items.end());
    return Value::vector(std::move(items));
  });
  unary("addpair", [](const Value &t) {
    return Value::scalar(wrap_add(t.first().as_int(), t.second().as_int()));
  });
  unary("swap", [](const Value &t) { return Value::tuple(t.second(), t.first()); });
  unary("zipt", [](const Value &t) { return zipt(t); });
  unary("unzipt", [](const Value &v) { return unzipt(v); });
  return lib;
}

}  // namespace

const PrimitiveLibrary &PrimitiveLibrary::standard() {
  static const PrimitiveLibrary lib = make_standard();
  return lib;
}

void PrimitiveLibrary::add(Primitive p) {
  std::string name = p.name;
  prims_.insert_or_assign(std::move(name), std::move(p));
}

const Primitive *PrimitiveLibrary::find(std::string_view name) const {
  auto it = prims_.find(name);
  return it == prims_.end() ? nullptr : &it->second;
}

std::vector<std::string> PrimitiveLibrary::names() const {
  std::vector<std::string> out;
  for (const auto &[name, p] : prims_) out.push_back(name);
  return out;
}

bool known_primitive(std::string_view name) {
  return PrimitiveLibrary::standard().find(name) != nullptr;
}

// --- Combinators ---

Value reshape_to(std::size_t k, const Value &v) {
  if (!v.is_vector()) throw ShapeError("reshapeTo needs a vector, got " + print_value(v));
  if (k == 0 || v.length() % k != 0) {
    throw DivisibilityError(
        fmt::format("reshapeTo {}: length {} is not a multiple of {}", k, v.length(), k));
  }
  std::vector<Value> groups;
  groups.reserve(v.length() / k);
  for (std::size_t start = 0; start < v.length(); start += k) {
    groups.push_back(Value::vector(std::vector<Value>(
        v.items().begin() + static_cast<std::ptrdiff_t>(start),
        v.items().begin() + static_cast<std::ptrdiff_t>(start + k))));
  }
  return Value::vector(std::move(groups));
}

Value reshape_from(std::size_t k, const Value &v) {
  if (!v.is_vector()) throw ShapeError("reshapeFrom needs a vector, got " + print_value(v));
  std::vector<Value> flat;
  flat.reserve(v.length() * k);
  for (const Value &group : v.items()) {
    if (!group.is_vector() || group.length() != k) {
      throw ShapeError(fmt::format("reshapeFrom {}: element {} is not a {}-vector", k,
                                   print_value(group), k));
    }
    flat.insert(flat.end(), group.items().begin(), group.items().end());
  }
  return Value::vector(std::move(flat));
}

Value to_vector(std::size_t k, const Value &v) {
  return Value::vector(std::vector<Value>(k, v));
}

Value from_vector(std::size_t k, const Value &v) {
  if (!v.is_vector() || v.length() == 0) {
    throw ShapeError("fromVector needs a non-empty vector, got " + print_value(v));
  }
  if (v.length() != k) {
    throw LengthMismatchError(fmt::format("fromVector {} given a vector of length {}", k, v.length()));
  }
  return v.items().front();
}

Value zipt(const Value &pair) {
  const Value &xs = pair.first();
  const Value &ys = pair.second();
  if (!xs.is_vector() || !ys.is_vector()) {
    throw ShapeError("zipt needs a pair of vectors, got " + print_value(pair));
  }
  if (xs.length() != ys.length()) {
    throw LengthMismatchError(
        fmt::format("zipt: lengths {} and {} differ", xs.length(), ys.length()));
  }
  std::vector<Value> out;
  out.reserve(xs.length());
  for (std::size_t i = 0; i < xs.length(); ++i) {
    out.push_back(Value::tuple(xs.items()[i], ys.items()[i]));
  }
  return Value::vector(std::move(out));
}

Value unzipt(const Value &v) {
  if (!v.is_vector()) throw ShapeError("unzipt needs a vector of pairs, got " + print_value(v));
  std::vector<Value> firsts;
  std::vector<Value> seconds;
  firsts.reserve(v.length());
  seconds.reserve(v.length());
  for (const Value &t : v.items()) {
    firsts.push_back(t.first());
    seconds.push_back(t.second());
  }
  return Value::tuple(Value::vector(std::move(firsts)), Value::vector(std::move(seconds)));
}

Value zipt_nested(std::size_t levels, const Value &pair) {
  Value zipped = zipt(pair);
  if (levels <= 1) return zipped;
  std::vector<Value> out;
  out.reserve(zipped.length());
  for (const Value &inner : zipped.items()) out.push_back(zipt_nested(levels - 1, inner));
  return Value::vector(std::move(out));
}

Value unzipt_nested(std::size_t levels, const Value &v) {
  if (levels <= 1) return unzipt(v);
  if (!v.is_vector()) throw ShapeError("unzipt needs a vector, got " + print_value(v));
  std::vector<Value> inner;
  inner.reserve(v.length());
  for (const Value &item : v.items()) inner.push_back(unzipt_nested(levels - 1, item));
  return unzipt(Value::vector(std::move(inner)));
}

// --- Transforms on values ---

Value apply_op_value(const TypeOp &op, const Value &v) {
  switch (op.kind) {
    case TypeOp::Kind::kS:
      return Value::vector({v});
    case TypeOp::Kind::kSInv:
      if (!v.is_vector() || v.length() != 1) {
        throw DimensionError("S^-1 needs a one-element vector, got " + print_value(v));
      }
      return v.items().front();
    case TypeOp::Kind::kM: {
      if (!v.is_vector()) return v;
      const TypeTransform inner = op.mapped();
      std::vector<Value> out;
      out.reserve(v.length());
      for (const Value &item : v.items()) out.push_back(apply_transform_value(inner, item));
      return Value::vector(std::move(out));
    }
    case TypeOp::Kind::kR:
    case TypeOp::Kind::kRInv: {
      if (!v.is_vector()) return v;
      const bool forward = op.kind == TypeOp::Kind::kR;
      if (v.length() == 0 || !v.items().front().is_vector()) {
        throw ShapeError(fmt::format("{} needs a 2-D vector, got {}", forward ? "R" : "R^-1",
                                     print_value(v)));
      }
      const std::size_t outer = v.length();
      const std::size_t inner = v.items().front().length();
      std::size_t new_inner = 0;
      if (forward) {
        if (outer % op.param != 0) {
          throw DivisibilityError(fmt::format("R {}: outer length {} is not a multiple of {}",
                                              op.param, outer, op.param));
        }
        new_inner = inner * op.param;
      } else {
        if (inner % op.param != 0) {
          throw DivisibilityError(fmt::format("R^-1 {}: inner length {} is not a multiple of {}",
                                              op.param, inner, op.param));
        }
        new_inner = inner / op.param;
      }
      return reshape_to(new_inner, reshape_from(inner, v));
    }
    case TypeOp::Kind::kI:
      return v;
    case TypeOp::Kind::kV:
      return to_vector(op.param, v);
    case TypeOp::Kind::kVInv:
      if (!v.is_vector() || v.length() != op.param) {
        throw TypeMismatchError(fmt::format("V^-1 {} needs a vector of length {}, got {}",
                                            op.param, op.param, print_value(v)));
      }
      return v.items().front();
  }
  return v;
}

Value apply_transform_value(const TypeTransform &tr, const Value &v) {
  Value cur = v;
  for (auto it = tr.ops().rbegin(); it != tr.ops().rend(); ++it) cur = apply_op_value(*it, cur);
  return cur;
}

// --- Interpreter ---

Value call(const OpaqueFn &f, std::span<const Value> args, const PrimitiveLibrary &lib) {
  switch (f.form) {
    case FnForm::kOpaque:
      throw MissingPrimitiveError(fmt::format("function '{}' has no executable body", f.name));
    case FnForm::kPrimitive: {
      const Primitive *p = lib.find(f.primitive);
      if (p == nullptr) {
        throw MissingPrimitiveError(
            fmt::format("function '{}': no primitive named '{}'", f.name, f.primitive));
      }
      if (p->arity != args.size()) {
        throw TypeError(fmt::format("primitive '{}' takes {} argument(s), got {}", p->name,
                                    p->arity, args.size()));
      }
      return p->body(args);
    }
    case FnForm::kElementwise: {
      const Value &xs = args[0];
      if (!xs.is_vector()) {
        throw ShapeError(fmt::format("'{}' = map {} needs a vector", f.name, f.inner->name));
      }
      std::vector<Value> out;
      out.reserve(xs.length());
      for (const Value &x : xs.items()) out.push_back(call(*f.inner, std::span(&x, 1), lib));
      return Value::vector(std::move(out));
    }
    case FnForm::kFoldOf: {
      const Value &xs = args[1];
      if (!xs.is_vector()) {
        throw ShapeError(fmt::format("'{}' = foldl {} needs a vector", f.name, f.inner->name));
      }
      Value acc = args[0];
      for (const Value &x : xs.items()) {
        const Value pair[2] = {acc, x};
        acc = call(*f.inner, pair, lib);
      }
      return acc;
    }
    case FnForm::kNarrow: {
      const Value widened = to_vector(f.width, args[0]);
      return from_vector(f.width, call(*f.inner, std::span(&widened, 1), lib));
    }
    case FnForm::kNarrowFold: {
      const Value pair[2] = {args[0], to_vector(f.width, args[1])};
      return call(*f.inner, pair, lib);
    }
  }
  return {};
}

Value eval_stage(const Stage &stage, const Value &v, const PrimitiveLibrary &lib) {
  switch (stage.kind) {
    case Stage::Kind::kMap: {
      if (!v.is_vector()) throw ShapeError("map needs a vector, got " + print_value(v));
      std::vector<Value> out;
      out.reserve(v.length());
      for (const Value &x : v.items()) out.push_back(call(*stage.fn, std::span(&x, 1), lib));
      return Value::vector(std::move(out));
    }
    case Stage::Kind::kFold: {
      if (!v.is_vector()) throw ShapeError("foldl needs a vector, got " + print_value(v));
      Value acc = stage.acc;
      for (const Value &x : v.items()) {
        const Value pair[2] = {acc, x};
        acc = call(*stage.fn, pair, lib);
      }
      return acc;
    }
    case Stage::Kind::kZip:
    case Stage::Kind::kZipt:
      return zipt(v);
    case Stage::Kind::kUnzip:
    case Stage::Kind::kUnzipt:
      return unzipt(v);
    case Stage::Kind::kReshapeTo:
    case Stage::Kind::kReshapeFrom:
      if (v.is_tuple()) {
        return Value::tuple(eval_stage(stage, v.first(), lib), eval_stage(stage, v.second(), lib));
      }
      return stage.kind == Stage::Kind::kReshapeTo ? reshape_to(stage.width, v)
                                                   : reshape_from(stage.width, v);
    case Stage::Kind::kComposed: {
      Value cur = v;
      for (const Stage &part : stage.parts) cur = eval_stage(part, cur, lib);
      return cur;
    }
  }
  return v;
}

Value eval(const Program &p, const Value &v, const PrimitiveLibrary &lib) {
  if (!matches(v, p.input.type)) {
    throw TypeError(fmt::format("input {} does not have type {}", print_value(v),
                                 print_type(p.input.type)));
  }
  Value cur = v;
  for (const std::string &name : p.pipeline) cur = eval_stage(p.stage(name), cur, lib);
  return cur;
}

Value random_value(const VecType &t, Rng &rng, std::int64_t lo, std::int64_t hi) {
  switch (t.kind()) {
    case VecType::Kind::kAtom:
      return Value::scalar(rng.uniform(lo, hi));
    case VecType::Kind::kTuple: {
      Value first = random_value(t.first(), rng, lo, hi);
      return Value::tuple(std::move(first), random_value(t.second(), rng, lo, hi));
    }
    case VecType::Kind::kVec: {
      std::vector<Value> items;
      items.reserve(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) items.push_back(random_value(t.element(), rng, lo, hi));
      return Value::vector(std::move(items));
    }
  }
  return {};
}

}  // namespace vectx
