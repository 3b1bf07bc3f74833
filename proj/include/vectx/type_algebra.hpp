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

#ifndef VECTX_TYPE_ALGEBRA_HPP
#define VECTX_TYPE_ALGEBRA_HPP

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace vectx {

/**
 * A nested, size-indexed vector type.
 *
 * A VecType is either an atom (`a`), a sized vector of some element type
 * (`[a]<4>`), or a binary tuple (`(a,b)`). Tuples only appear as the
 * element type produced by zipping or as the pair of arguments consumed by
 * it; the reshape algebra treats a tuple as an opaque leaf, the same way it
 * treats an atom.
 *
 * Values are immutable and cheap to copy (the tree is shared).
 */
class VecType {
 public:
  enum class Kind { kAtom, kVec, kTuple };

  // The placeholder atom `_`.
  VecType();

  static VecType atom(std::string name);
  // Throws DimensionError when size is 0.
  static VecType vec(std::size_t size, VecType element);
  static VecType tuple(VecType first, VecType second);

  Kind kind() const;
  bool is_atom() const { return kind() == Kind::kAtom; }
  bool is_vec() const { return kind() == Kind::kVec; }
  bool is_tuple() const { return kind() == Kind::kTuple; }

  const std::string &name() const;  // atoms only
  std::size_t size() const;         // vectors only
  const VecType &element() const;   // vectors only
  const VecType &first() const;     // tuples only
  const VecType &second() const;    // tuples only

  // Number of directly nested vector layers: `a` is 0, `[[a]<2>]<3>` is 2.
  std::size_t depth() const;
  // The innermost non-vector type.
  const VecType &leaf() const;

  friend bool operator==(const VecType &lhs, const VecType &rhs);
  friend bool operator!=(const VecType &lhs, const VecType &rhs) {
    return !(lhs == rhs);
  }

 private:
  struct Node;
  explicit VecType(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Product of all vector sizes; 1 for atoms and tuples.
std::size_t total_size(const VecType &t);

// Sizes of the vector layers, innermost first. `[a]<2><3>` gives {2, 3}.
std::vector<std::size_t> dimensions(const VecType &t);
// Inverse of `dimensions`: wraps `leaf` in one vector per entry.
VecType with_dimensions(const VecType &leaf, const std::vector<std::size_t> &dims);

class TypeTransform;

// One primitive operation of the reshape algebra.
struct TypeOp {
  enum class Kind { kS, kSInv, kM, kR, kRInv, kI, kV, kVInv };

  Kind kind = Kind::kI;
  std::size_t param = 0;       // m for R/RInv, k for V/VInv
  std::vector<TypeOp> inner;   // the mapped transform for M

  static TypeOp singleton() { return {Kind::kS, 0, {}}; }
  static TypeOp singleton_inv() { return {Kind::kSInv, 0, {}}; }
  static TypeOp map(const TypeTransform &f);
  static TypeOp reshape(std::size_t m);
  static TypeOp reshape_inv(std::size_t m);
  static TypeOp identity() { return {Kind::kI, 0, {}}; }
  static TypeOp vector(std::size_t k);
  static TypeOp vector_inv(std::size_t k);

  TypeTransform mapped() const;

  friend bool operator==(const TypeOp &, const TypeOp &) = default;
};

/**
 * A sequence of TypeOps written left to right and applied right to left:
 * `R 2 M ( S )` applies `M ( S )` first. The empty sequence is the identity.
 */
class TypeTransform {
 public:
  TypeTransform() = default;
  explicit TypeTransform(std::vector<TypeOp> ops) : ops_(std::move(ops)) {}

  const std::vector<TypeOp> &ops() const { return ops_; }
  bool empty() const { return ops_.empty(); }

  friend bool operator==(const TypeTransform &, const TypeTransform &) = default;

 private:
  std::vector<TypeOp> ops_;
};

// `outer ∘ inner`: inner is applied first. Plain concatenation.
TypeTransform compose(const TypeTransform &outer, const TypeTransform &inner);

VecType apply_op(const TypeOp &op, const VecType &t);
// Errors carry the position of the failing op (0 = leftmost).
VecType apply_transform(const TypeTransform &tr, const VecType &t);

// Reverses the sequence and inverts every op; M maps the inverted inner
// transform.
TypeTransform invert_transform(const TypeTransform &tr);

struct Canonical {
  TypeTransform transform;
  VecType flat;
};

// Flattens t to `[leaf]<N>` by repeatedly collapsing the outer two
// dimensions (`R^-1 n` then `M ( S^-1 )`). A non-vector becomes `[leaf]<1>`
// via S.
Canonical canonicalize(const VecType &t);

// A transform taking `from` to `to`: flatten `from`, then rebuild `to` with
// alternating `M ( S )` and `R m`. Throws SizeMismatchError or
// AtomMismatchError when the two types are not in the same V(a, N).
TypeTransform path_between(const VecType &from, const VecType &to);

VecType parse_type(std::string_view text);
std::string print_type(const VecType &t);

TypeTransform parse_transform(std::string_view text);
std::string print_transform(const TypeTransform &tr);

// True when tr contains V or V^-1 anywhere (these change the total size).
bool changes_size(const TypeTransform &tr);

}  // namespace vectx

#endif  // VECTX_TYPE_ALGEBRA_HPP
