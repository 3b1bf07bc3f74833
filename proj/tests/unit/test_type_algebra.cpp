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


#include <doctest.h>

#include "gen.hpp"
#include "vectx/error.hpp"
#include "vectx/type_algebra.hpp"

using namespace vectx;

namespace {

VecType T(std::string_view s) { return parse_type(s); }
TypeTransform X(std::string_view s) { return parse_transform(s); }
std::string apply(std::string_view tr, std::string_view t) {
  return print_type(apply_transform(X(tr), T(t)));
}

}  // namespace

TEST_CASE("total size") {
  CHECK(total_size(T("[[a]<3>]<4>")) == 12);
  CHECK(total_size(T("a")) == 1);
  CHECK(total_size(T("[a]<7>")) == 7);
  CHECK(total_size(T("([a]<3>,[b]<3>)")) == 1);
}

TEST_CASE("type parsing and printing") {
  const VecType t = T("[a]<2><3>");
  REQUIRE(t.is_vec());
  CHECK(t.size() == 3);
  CHECK(t.element().size() == 2);
  CHECK(t.element().element() == VecType::atom("a"));
  CHECK(print_type(t) == "[[a]<2>]<3>");
  CHECK(T("[[a]<2>]<3>") == t);
  CHECK(T("a") == VecType::atom("a"));
  CHECK(T("  [ x_1 ] < 4 > ") == VecType::vec(4, VecType::atom("x_1")));
  CHECK(print_type(T("([a]<2>, b)")) == "([a]<2>,b)");
  CHECK(dimensions(T("[a]<2><3><5>")) == std::vector<std::size_t>{2, 3, 5});

  CHECK_THROWS_AS(T("[a]<0>"), ParseError);
  CHECK_THROWS_AS(T("[a]"), ParseError);
  CHECK_THROWS_AS(T("[a]<2"), ParseError);
  CHECK_THROWS_AS(T("[a]<2> x"), ParseError);
  CHECK_THROWS_AS(T("1a"), ParseError);
  CHECK_THROWS_AS(VecType::vec(0, VecType::atom("a")), DimensionError);
}

TEST_CASE("parse error positions") {
  try {
    T("[a]<2><0>");
    FAIL("expected ParseError");
  } catch (const ParseError &e) {
    CHECK(e.column() == 8);
  }
}

TEST_CASE("single ops") {
  CHECK(apply("R 2", "[[a]<1>]<6>") == "[[a]<2>]<3>");
  CHECK(apply("S", "a") == "[a]<1>");
  CHECK(apply("S^-1", "[a]<1>") == "a");
  CHECK(apply("M ( S )", "[a]<6>") == "[[a]<1>]<6>");
  CHECK(apply("M ( S )", "a") == "a");
  CHECK(apply("R 3", "a") == "a");
  CHECK(apply("R^-1 2", "[[a]<4>]<3>") == "[[a]<2>]<6>");
  CHECK(apply("I", "[a]<5>") == "[a]<5>");
  CHECK(apply("V 3", "a") == "[a]<3>");
  CHECK(apply("V^-1 3", "[a]<3>") == "a");

  CHECK_THROWS_AS(apply("R 4", "[[a]<3>]<6>"), DivisibilityError);
  CHECK_THROWS_AS(apply("R^-1 4", "[[a]<3>]<6>"), DivisibilityError);
  CHECK_THROWS_AS(apply("R 2", "[a]<6>"), ShapeError);
  CHECK_THROWS_AS(apply("S^-1", "[a]<2>"), DimensionError);
  CHECK_THROWS_AS(apply("S^-1", "a"), DimensionError);
  CHECK_THROWS_AS(apply("V^-1 3", "[a]<2>"), TypeMismatchError);
  CHECK_THROWS_AS(apply("V^-1 3", "a"), TypeMismatchError);
}

TEST_CASE("transform composition is right to left") {
  CHECK(apply("R 2 M ( S )", "[a]<6>") == "[[a]<2>]<3>");
  CHECK(apply("M ( S^-1 ) R^-1 3", "[[a]<3>]<4>") == "[a]<12>");
  CHECK(apply("R 4 M ( S )", "[a]<16>") == "[[a]<4>]<4>");
  CHECK(apply("M ( M ( S ) )", "[[a]<2>]<3>") == "[[[a]<1>]<2>]<3>");
  const TypeTransform a = X("R 2"), b = X("M ( S )");
  CHECK(compose(a, b) == X("R 2 M ( S )"));
  CHECK(compose(TypeTransform(), a) == a);
  CHECK(compose(a, TypeTransform()) == a);
}

TEST_CASE("transform printing") {
  CHECK(print_transform(X("R 2 M(S)")) == "R 2 M ( S )");
  CHECK(print_transform(TypeTransform()) == "I");
  CHECK(print_transform(X("M ( S^-1 ) R^-1 2")) == "M ( S^-1 ) R^-1 2");
  CHECK_THROWS_AS(X("R"), ParseError);
  CHECK_THROWS_AS(X("R 0"), ParseError);
  CHECK_THROWS_AS(X("M S"), ParseError);
  CHECK_THROWS_AS(X("M ( S"), ParseError);
  CHECK_THROWS_AS(X("Q"), ParseError);
}

TEST_CASE("inversion") {
  CHECK(invert_transform(X("R 2 M ( S )")) == X("M ( S^-1 ) R^-1 2"));
  CHECK(invert_transform(TypeTransform()) == TypeTransform());
  CHECK(invert_transform(X("V 3 M ( R 2 )")) == X("M ( R^-1 2 ) V^-1 3"));
}

TEST_CASE("canonicalize") {
  Canonical c = canonicalize(T("[[a]<2>]<3>"));
  CHECK(c.transform == X("M ( S^-1 ) R^-1 2"));
  CHECK(c.flat == T("[a]<6>"));

  c = canonicalize(T("[a]<6>"));
  CHECK(c.transform.empty());
  CHECK(c.flat == T("[a]<6>"));

  const VecType deep = T("[[[a]<2>]<3>]<5>");
  c = canonicalize(deep);
  CHECK(c.flat == T("[a]<30>"));
  CHECK(apply_transform(c.transform, deep) == c.flat);

  c = canonicalize(T("a"));
  CHECK(c.flat == T("[a]<1>"));
}

TEST_CASE("path between") {
  const VecType a = T("[a]<6>"), b = T("[[a]<2>]<3>");
  CHECK(apply_transform(path_between(a, b), a) == b);
  CHECK(apply_transform(path_between(b, a), b) == a);
  const VecType c = T("[a]<8>");
  CHECK(apply_transform(path_between(c, c), c) == c);
  CHECK_THROWS_AS(path_between(a, T("[a]<7>")), SizeMismatchError);
  CHECK_THROWS_AS(path_between(a, T("[b]<6>")), AtomMismatchError);
  CHECK(apply_transform(path_between(T("a"), T("[[a]<1>]<1>")), T("a")) == T("[[a]<1>]<1>"));
}

TEST_CASE("property: completeness and closure") {
  Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    const std::size_t n = 1 + rng.index(64);
    const VecType t1 = testing::random_type(n, 4, rng);
    const VecType t2 = testing::random_type(n, 4, rng);
    CAPTURE(print_type(t1));
    CAPTURE(print_type(t2));
    REQUIRE(apply_transform(path_between(t1, t2), t1) == t2);
  }
}

TEST_CASE("property: reversibility and size invariance") {
  Rng rng(12);
  for (int i = 0; i < 500; ++i) {
    const VecType t = testing::random_type(1 + rng.index(64), 4, rng);
    const bool allow_v = i % 3 == 0;
    const TypeTransform tr = testing::random_transform(t, rng, 1 + rng.index(6), allow_v);
    CAPTURE(print_type(t));
    CAPTURE(print_transform(tr));
    const VecType u = apply_transform(tr, t);
    REQUIRE(apply_transform(invert_transform(tr), u) == t);
    if (!changes_size(tr)) {
      REQUIRE(total_size(u) == total_size(t));
      REQUIRE(u.leaf() == t.leaf());
    }
  }
}

TEST_CASE("property: double inversion and transform round trip") {
  Rng rng(13);
  for (int i = 0; i < 500; ++i) {
    const VecType t = testing::random_type(1 + rng.index(64), 4, rng);
    const TypeTransform tr = testing::random_transform(t, rng, 1 + rng.index(6), true);
    REQUIRE(invert_transform(invert_transform(tr)) == tr);
    if (!tr.empty()) REQUIRE(parse_transform(print_transform(tr)) == tr);
    REQUIRE(parse_type(print_type(t)) == t);
  }
}

TEST_CASE("property: singleton identities") {
  Rng rng(14);
  for (int i = 0; i < 200; ++i) {
    const VecType t = testing::random_type(1 + rng.index(32), 3, rng);
    CHECK(apply_transform(X("S^-1 S"), t) == t);
    const VecType one = VecType::vec(1, t);
    CHECK(apply_transform(X("S S^-1"), one) == one);
  }
}
