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
#include <fmt/format.h>

#include <algorithm>
#include <vector>

#include "gen.hpp"
#include "vectx/error.hpp"
#include "vectx/program.hpp"
#include "vectx/runtime.hpp"
#include "vectx/value.hpp"

using namespace vectx;

namespace {

Value V(std::string_view s) { return parse_value(s); }
std::string P(const Value &v) { return print_value(v); }

Program prog(std::string_view text) { return parse_program(text); }

}  // namespace

TEST_CASE("values parse and print") {
  CHECK(P(V("[ 1, -2 ,3 ]")) == "[1,-2,3]");
  CHECK(P(V("([1,2],[3,4])")) == "([1,2],[3,4])");
  CHECK(P(V("[(1,3),(2,4)]")) == "[(1,3),(2,4)]");
  CHECK(V("7").as_int() == 7);
  CHECK_THROWS_AS(V("[1,2"), ParseError);
  CHECK_THROWS_AS(V("[1,,2]"), ParseError);
  CHECK(shape_of(V("[[1,2],[3,4],[5,6]]")) == parse_type("[[int]<2>]<3>"));
  CHECK_THROWS_AS(shape_of(V("[[1,2],[3]]")), ShapeError);
  CHECK(matches(V("[[1,2],[3,4]]"), parse_type("[[a]<2>]<2>")));
  CHECK_FALSE(matches(V("[[1,2],[3,4]]"), parse_type("[a]<4>")));
  CHECK(P(flatten(V("[[1,2],[3,4]]"))) == "[1,2,3,4]");
}

TEST_CASE("reshape combinators") {
  CHECK(P(reshape_to(2, V("[1,2,3,4,5,6]"))) == "[[1,2],[3,4],[5,6]]");
  CHECK(P(reshape_from(2, V("[[1,2],[3,4]]"))) == "[1,2,3,4]");
  CHECK_THROWS_AS(reshape_to(4, V("[1,2,3]")), DivisibilityError);
  CHECK_THROWS_AS(reshape_from(3, V("[[1,2],[3,4]]")), ShapeError);
  Rng rng(21);
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 1 + rng.index(48);
    const Value v = random_value(VecType::vec(n, VecType::atom("int")), rng);
    for (std::size_t k : testing::divisors(n)) {
      REQUIRE(reshape_from(k, reshape_to(k, v)) == v);
    }
  }
}

TEST_CASE("vector wrappers") {
  CHECK(P(to_vector(3, V("7"))) == "[7,7,7]");
  CHECK(P(from_vector(3, V("[7,8,9]"))) == "7");
  CHECK(P(from_vector(3, to_vector(3, V("5")))) == "5");
  CHECK_THROWS_AS(from_vector(3, V("[1,2]")), LengthMismatchError);
}

TEST_CASE("zip combinators") {
  CHECK(P(zipt(V("([1,2],[3,4])"))) == "[(1,3),(2,4)]");
  CHECK(P(unzipt(V("[(1,3),(2,4)]"))) == "([1,2],[3,4])");
  CHECK_THROWS_AS(zipt(V("([1,2],[3])")), LengthMismatchError);
  const Value pair = V("([[1,2],[3,4]],[[5,6],[7,8]])");
  CHECK(P(zipt_nested(2, pair)) == "[[(1,5),(2,6)],[(3,7),(4,8)]]");
  CHECK(unzipt_nested(2, zipt_nested(2, pair)) == pair);
}

TEST_CASE("transforms on values") {
  const TypeTransform flat = parse_transform("M ( S^-1 ) R^-1 2");
  CHECK(P(apply_transform_value(flat, V("[[1,2],[3,4],[5,6]]"))) == "[1,2,3,4,5,6]");
  CHECK(P(apply_transform_value(parse_transform("I"), V("[4,5]"))) == "[4,5]");
  CHECK(P(apply_transform_value(parse_transform("R 2 M ( S )"), V("[1,2,3,4]"))) ==
        "[[1,2],[3,4]]");
  CHECK(P(apply_transform_value(parse_transform("V 2"), V("3"))) == "[3,3]");
}

TEST_CASE("property: transforms preserve element order") {
  Rng rng(22);
  for (int i = 0; i < 200; ++i) {
    const VecType t = testing::random_type(1 + rng.index(64), 4, rng, VecType::atom("int"));
    const TypeTransform tr = testing::random_transform(t, rng, 1 + rng.index(6));
    const Value v = random_value(t, rng);
    const Value u = apply_transform_value(tr, v);
    CAPTURE(print_transform(tr));
    CAPTURE(P(v));
    REQUIRE(matches(u, apply_transform(tr, t)));
    REQUIRE(leaves(u) == leaves(v));
    REQUIRE(apply_transform_value(invert_transform(tr), u) == v);
  }
}

TEST_CASE("eval") {
  Program p = prog(
      "input s :: [int]<3>\n"
      "fn f :: int -> int\n"
      "fn f = prim inc\n"
      "stage g = map f\n"
      "result r = g s\n");
  CHECK(P(eval(p, V("[1,2,3]"))) == "[2,3,4]");

  p = prog(
      "input s :: [int]<4>\n"
      "fn f :: int -> int -> int\n"
      "fn f = prim add\n"
      "stage g = foldl f 0\n"
      "result r = g s\n");
  CHECK(P(eval(p, V("[1,2,3,4]"))) == "10");
  CHECK_THROWS_AS(eval(p, V("[1,2,3]")), TypeError);

  p = prog(
      "input s :: [[int]<2>]<2>\n"
      "fn h :: int -> int -> int\n"
      "fn h = prim add\n"
      "fn f :: int -> [int]<2> -> int\n"
      "fn f = foldof h\n"
      "stage g = foldl f 0\n"
      "result r = g s\n");
  CHECK(P(eval(p, V("[[1,2],[3,4]]"))) == "10");
}

TEST_CASE("primitives") {
  const PrimitiveLibrary &lib = PrimitiveLibrary::standard();
  auto run = [&](std::string_view name, std::vector<Value> args) {
    const Primitive *p = lib.find(name);
    REQUIRE(p != nullptr);
    return P(p->body(args));
  };
  CHECK(run("inc", {V("4")}) == "5");
  CHECK(run("triple", {V("4")}) == "12");
  CHECK(run("negate", {V("4")}) == "-4");
  CHECK(run("add", {V("4"), V("5")}) == "9");
  CHECK(run("mul", {V("4"), V("5")}) == "20");
  CHECK(run("max", {V("4"), V("-5")}) == "4");
  CHECK(run("horner", {V("4"), V("5")}) == "45");
  CHECK(run("reverse", {V("[1,2,3]")}) == "[3,2,1]");
  CHECK(run("sum", {V("[1,2,3]")}) == "6");
  CHECK(run("sumsq", {V("1"), V("[1,2,3]")}) == "37");
  CHECK(run("swap", {V("(1,2)")}) == "(2,1)");
  CHECK(run("addpair", {V("(1,2)")}) == "3");
  CHECK(lib.find("nope") == nullptr);
  CHECK(known_primitive("zipt"));
}

TEST_CASE("property: fold over nested equals fold over flat") {
  Rng rng(23);
  for (const char *prim : {"add", "max", "horner"}) {
    for (int i = 0; i < 100; ++i) {
      const std::size_t k = 1 + rng.index(6), m = 1 + rng.index(6);
      const std::string fn = fmt::format(
          "fn f :: int -> int -> int\nfn f = prim {0}\n"
          "fn ff :: int -> [int]<{1}> -> int\nfn ff = foldof f\n",
          prim, k);
      const Program nested = prog(fmt::format(
          "input s :: [[int]<{}>]<{}>\n{}stage g = foldl ff 3\nresult r = g s\n", k, m, fn));
      const Program flat = prog(fmt::format(
          "input s :: [int]<{}>\n{}stage g = foldl f 3\nresult r = g s\n", k * m, fn));
      const Value v = random_value(nested.input.type, rng);
      REQUIRE(eval(nested, v) == eval(flat, flatten(v)));
    }
  }
}
