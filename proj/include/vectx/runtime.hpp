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

#ifndef VECTX_RUNTIME_HPP
#define VECTX_RUNTIME_HPP

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vectx/program.hpp"
#include "vectx/random.hpp"
#include "vectx/type_algebra.hpp"
#include "vectx/value.hpp"

namespace vectx {

struct Primitive {
  std::string name;
  std::size_t arity = 1;
  std::function<Value(std::span<const Value>)> body;
};

// Executable bodies for `fn f = prim <name>`. All integer arithmetic wraps
// modulo 2^64.
class PrimitiveLibrary {
 public:
  // inc, triple, negate, square, add, mul, max, horner (10*acc+x), sum,
  // sumsq (acc + (sum chunk)^2), reverse, addpair, swap, zipt, unzipt.
  static const PrimitiveLibrary &standard();

  void add(Primitive p);
  const Primitive *find(std::string_view name) const;
  std::vector<std::string> names() const;

 private:
  std::map<std::string, Primitive, std::less<>> prims_;
};

bool known_primitive(std::string_view name);

// Runs f on its arguments. Throws MissingPrimitiveError when f (or anything
// it is built from) has no executable body.
Value call(const OpaqueFn &f, std::span<const Value> args,
           const PrimitiveLibrary &lib = PrimitiveLibrary::standard());

Value eval_stage(const Stage &stage, const Value &v,
                 const PrimitiveLibrary &lib = PrimitiveLibrary::standard());

// Reference interpreter. Throws ShapeError when v does not match the
// program's input type.
Value eval(const Program &p, const Value &v,
           const PrimitiveLibrary &lib = PrimitiveLibrary::standard());

// Chunks a vector of length n into n/k consecutive groups of k.
Value reshape_to(std::size_t k, const Value &v);
// Concatenates a vector of k-vectors.
Value reshape_from(std::size_t k, const Value &v);

// k copies of v.
Value to_vector(std::size_t k, const Value &v);
// Head of a non-empty vector.
Value from_vector(std::size_t k, const Value &v);

Value zipt(const Value &pair);
Value unzipt(const Value &v);
// zipt lifted over `levels` vector layers: levels 1 is zipt, levels 2 is
// `map zipt . zipt`, and so on.
Value zipt_nested(std::size_t levels, const Value &pair);
// Inverse of zipt_nested: levels 2 is `unzipt . map unzipt`.
Value unzipt_nested(std::size_t levels, const Value &v);

Value apply_op_value(const TypeOp &op, const Value &v);
// Value-level mirror of apply_transform; leaf order is preserved exactly.
Value apply_transform_value(const TypeTransform &tr, const Value &v);

// Random inhabitant of t with scalars drawn from [lo, hi].
Value random_value(const VecType &t, Rng &rng, std::int64_t lo = -9, std::int64_t hi = 9);

}  // namespace vectx

#endif  // VECTX_RUNTIME_HPP
