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

#include "gen.hpp"
#include "vectx/derivation.hpp"
#include "vectx/error.hpp"
#include "vectx/program.hpp"
#include "vectx/runtime.hpp"

using namespace vectx;

namespace {

TypeTransform X(std::string_view s) { return parse_transform(s); }

Program map_program(std::string_view type, std::string_view fns, std::string_view f) {
  return parse_program(fmt::format("input s :: {}\n{}stage g = map {}\nresult r = g s\n", type,
                                   fns, f));
}

std::vector<std::string> stage_kinds(const Program &p) {
  std::vector<std::string> out;
  for (const Stage &s : p.pipeline_stages()) {
    switch (s.kind) {
      case Stage::Kind::kMap: out.push_back("map " + s.fn->name); break;
      case Stage::Kind::kFold: out.push_back("foldl " + s.fn->name); break;
      case Stage::Kind::kReshapeTo: out.push_back(fmt::format("reshapeTo {}", s.width)); break;
      case Stage::Kind::kReshapeFrom: out.push_back(fmt::format("reshapeFrom {}", s.width)); break;
      default: out.push_back(s.name);
    }
  }
  return out;
}

constexpr std::string_view kInc = "fn f :: int -> int\nfn f = prim inc\n";

}  // namespace

TEST_CASE("factor transform") {
  const VecType flat16 = parse_type("[a]<16>");
  CHECK(factor_transform(X("R 4 M ( S )"), flat16) == std::vector<Step>{Step::increase(4)});
  CHECK(factor_transform(X("M ( S^-1 ) R^-1 3"), parse_type("[[a]<3>]<4>")) ==
        std::vector<Step>{Step::decrease(3)});
  CHECK(factor_transform(X("R 2 R^-1 3"), parse_type("[[a]<3>]<4>")) ==
        std::vector<Step>{Step::repartition(2, 3)});
  CHECK(factor_transform(TypeTransform(), flat16).empty());
  CHECK(factor_transform(X("M ( S^-1 ) R^-1 4 R 4 M ( S )"), flat16).empty());

  const VecType from = parse_type("[a]<12>"), to = parse_type("[[a]<2>]<6>");
  const TypeTransform tr = path_between(from, to);
  const std::vector<Step> steps = factor_transform(tr, from);
  CHECK(apply_transform(steps_transform(steps), from) == to);

  CHECK(print_step(Step::increase(4)) == "Increase(4)");
  CHECK(print_step(Step::decrease(3)) == "Decrease(3)");
  CHECK(print_step(Step::repartition(2, 3)) == "Repartition(2, 3)");
}

TEST_CASE("property: factored steps reproduce the transform") {
  Rng rng(31);
  for (int i = 0; i < 300; ++i) {
    const VecType t = testing::random_type(1 + rng.index(64), 4, rng);
    const TypeTransform tr = testing::random_transform(t, rng, 1 + rng.index(6));
    CAPTURE(print_type(t));
    CAPTURE(print_transform(tr));
    const VecType u = apply_transform(tr, t);
    if (u != t && (!t.is_vec() || !u.is_vec())) {
      REQUIRE_THROWS_AS(factor_transform(tr, t), DerivationError);
      continue;
    }
    const std::vector<Step> steps = factor_transform(tr, t);
    VecType cur = t;
    for (const Step &s : steps) cur = apply_step(s, cur);
    REQUIRE(cur == apply_transform(tr, t));
  }
}

TEST_CASE("map increase") {
  const Program p = map_program("[int]<6>", kInc, "f");
  const Derivation d = derive(p, X("R 2 M ( S )"));
  CHECK(d.verdict == Verdict::preserved());
  CHECK(d.derived.input.type == parse_type("[[int]<2>]<3>"));
  CHECK(stage_kinds(d.derived) == std::vector<std::string>{"map map_f"});
  CHECK(d.derived.function("map_f")->elementwise_of()->name == "f");
  CHECK(stage_kinds(d.boundary) ==
        std::vector<std::string>{"reshapeTo 2", "map map_f", "reshapeFrom 2"});
  CHECK(d.output_transform == X("R 2 M ( S )"));
  CHECK(d.combinators == std::set<std::string>{"reshapeTo 2", "reshapeFrom 2"});
  const VerificationReport r = verify(d, 100, 42);
  CHECK(r.passed == 100);
  CHECK_FALSE(r.engine_defect);
}

TEST_CASE("map decrease with an elementwise annotation") {
  const Program p = map_program("[[int]<3>]<4>",
                                "fn h :: int -> int\nfn h = prim triple\n"
                                "fn f :: [int]<3> -> [int]<3>\nfn f = elementwise h\n",
                                "f");
  const Derivation d = derive(p, X("M ( S^-1 ) R^-1 3"));
  CHECK(d.verdict.kind == Verdict::Kind::kConditional);
  CHECK(d.verdict.satisfied);
  CHECK(d.derived.input.type == parse_type("[int]<12>"));
  CHECK(stage_kinds(d.derived) == std::vector<std::string>{"map h"});
  const VerificationReport r = verify(d, 100, 5);
  CHECK(r.passed == 100);
}

TEST_CASE("map decrease without an annotation") {
  const Program p = map_program("[[int]<3>]<4>",
                                "fn f :: [int]<3> -> [int]<3>\nfn f = prim reverse\n", "f");
  const Derivation d = derive(p, X("M ( S^-1 ) R^-1 3"));
  CHECK(d.verdict.kind == Verdict::Kind::kConditional);
  CHECK_FALSE(d.verdict.satisfied);
  CHECK(d.verdict.condition == "f = map h");
  CHECK(d.combinators.count("toVector 3") == 1);
  CHECK(d.combinators.count("fromVector 3") == 1);
  const VerificationReport r = verify(d, 100, 5);
  CHECK(r.passed < 100);
  REQUIRE(r.first_failure.has_value());
  CHECK(r.first_failure->expected != r.first_failure->actual);
  CHECK_FALSE(r.engine_defect);
}

TEST_CASE("map repartition") {
  const Program p = map_program("[[int]<3>]<4>",
                                "fn h :: int -> int\nfn h = prim negate\n"
                                "fn f :: [int]<3> -> [int]<3>\nfn f = elementwise h\n",
                                "f");
  const Derivation d = derive(p, X("R 2 R^-1 3"));
  CHECK(d.input_steps == std::vector<Step>{Step::repartition(2, 3)});
  CHECK(d.verdict.guaranteed());
  CHECK(d.derived.input.type == parse_type("[[int]<2>]<6>"));
  CHECK(verify(d, 100, 9).passed == 100);
}

TEST_CASE("fold increase, non-commutative") {
  const Program p = parse_program(
      "input s :: [int]<8>\nfn f :: int -> int -> int\nfn f = prim horner\n"
      "stage g = foldl f 0\nresult r = g s\n");
  const Derivation d = derive(p, X("R 2 M ( S )"));
  CHECK(d.verdict == Verdict::preserved());
  CHECK(d.output_transform.empty());
  CHECK(d.derived.input.type == parse_type("[[int]<2>]<4>"));
  CHECK(stage_kinds(d.derived) == std::vector<std::string>{"foldl foldl_f"});
  CHECK(verify(d, 100, 1).passed == 100);
}

TEST_CASE("fold decrease") {
  const Program annotated = parse_program(
      "input s :: [[int]<3>]<4>\nfn h :: int -> int -> int\nfn h = prim add\n"
      "fn f :: int -> [int]<3> -> int\nfn f = foldof h\n"
      "stage g = foldl f 0\nresult r = g s\n");
  Derivation d = derive(annotated, X("M ( S^-1 ) R^-1 3"));
  CHECK(d.verdict.kind == Verdict::Kind::kConditional);
  CHECK(d.verdict.satisfied);
  CHECK(stage_kinds(d.derived) == std::vector<std::string>{"foldl h"});
  CHECK(verify(d, 100, 2).passed == 100);

  const Program opaque = parse_program(
      "input s :: [[int]<3>]<4>\nfn f :: int -> [int]<3> -> int\nfn f = prim sumsq\n"
      "stage g = foldl f 0\nresult r = g s\n");
  d = derive(opaque, X("M ( S^-1 ) R^-1 3"));
  CHECK(d.verdict.kind == Verdict::Kind::kConditional);
  CHECK_FALSE(d.verdict.satisfied);
  CHECK(d.verdict.condition == "f = fold h");
  const VerificationReport r = verify(d, 100, 2);
  CHECK(r.passed < 100);
  CHECK(r.first_failure.has_value());
}

TEST_CASE("zip increase and mismatched arguments") {
  const Program p = parse_program(
      "input s :: ([int]<4>,[int]<4>)\nstage z = zipt\nresult r = z s\n");
  const Derivation d = derive(p, X("R 2 M ( S )"));
  CHECK(d.verdict == Verdict::preserved());
  CHECK(typecheck(d.derived).result == parse_type("[[(int,int)]<2>]<2>"));
  CHECK(d.combinators.count("zipt'") == 1);
  CHECK(verify(d, 100, 3).passed == 100);

  FunctionPool pool;
  const std::vector<Step> steps = {Step::increase(2), Step::increase(4)};
  CHECK_THROWS_AS(derive_zip_step(steps, p.stages[0], p.input.type, pool), DerivationError);
}

TEST_CASE("identity transform leaves the program alone") {
  const Program p = map_program("[int]<6>", kInc, "f");
  const Derivation d = derive(p, TypeTransform());
  CHECK(d.verdict == Verdict::preserved());
  CHECK(print_program(d.derived) == print_program(p));
  CHECK(print_program(d.boundary) == print_program(p));
}

TEST_CASE("two-stage pipeline threads the step") {
  const Program p = parse_program(
      "input s :: [int]<12>\nfn f :: int -> int\nfn f = prim triple\n"
      "fn a :: int -> int -> int\nfn a = prim add\n"
      "stage g = map f\nstage h = foldl a 0\nresult r = g |> h s\n");
  const Derivation d = derive(p, X("R 4 M ( S )"));
  CHECK(d.verdict == Verdict::preserved());
  CHECK(stage_kinds(d.derived) == std::vector<std::string>{"map map_f", "foldl foldl_a"});
  CHECK(verify(d, 100, 4).passed == 100);
}

TEST_CASE("transforms that do not apply are derivation errors") {
  const Program p = map_program("[int]<6>", kInc, "f");
  CHECK_THROWS_AS(derive(p, X("R 4 M ( S )")), DerivationError);
  CHECK_THROWS_AS(derive(p, X("V 2")), DerivationError);
}

TEST_CASE("verdict ordering") {
  const Verdict p = Verdict::preserved();
  const Verdict s = Verdict::conditional("f = map h", true);
  const Verdict u = Verdict::conditional("f = fold h", false);
  CHECK(weakest(p, s) == s);
  CHECK(weakest(s, u).satisfied == false);
  CHECK(weakest(u, Verdict::unknown()).kind == Verdict::Kind::kUnknown);
  CHECK(print_verdict(p) == "Preserved");
  CHECK(print_verdict(u) == "ConditionallyPreserved(f = fold h, unsatisfied)");
}

TEST_CASE("property: guaranteed derivations pass every trial") {
  struct Case {
    std::string fns;
    std::string stages;
    std::string pipeline;
  };
  const std::vector<Case> cases = {
      {"fn f :: int -> int\nfn f = prim inc\n", "stage g = map f\n", "g"},
      {"fn f :: int -> int -> int\nfn f = prim horner\n", "stage g = foldl f 7\n", "g"},
      {"fn f :: int -> int\nfn f = prim negate\nfn a :: int -> int -> int\nfn a = prim max\n",
       "stage g = map f\nstage h = foldl a 0\n", "g |> h"},
      {"fn f :: int -> int\nfn f = prim square\nfn k :: int -> int\nfn k = prim triple\n",
       "stage g = map f\nstage h = map k\n", "g |> h"},
  };
  Rng rng(37);
  std::size_t checked = 0;
  for (int i = 0; i < 120; ++i) {
    const Case &c = cases[static_cast<std::size_t>(i) % cases.size()];
    const std::size_t n = 1 + rng.index(64);
    const VecType from = testing::random_type(n, 3, rng, VecType::atom("int"));
    if (!from.is_vec()) continue;
    const VecType flat = VecType::vec(n, VecType::atom("int"));
    const Program p = parse_program(fmt::format("input s :: {}\n{}{}result r = {} s\n",
                                                print_type(flat), c.fns, c.stages, c.pipeline));
    const TypeTransform tr = path_between(flat, from);
    CAPTURE(print_transform(tr));
    const Derivation d = derive(p, tr);
    REQUIRE(d.verdict.guaranteed());
    const VerificationReport r = verify(d, 20, rng.next());
    REQUIRE(r.all_passed());
    REQUIRE_FALSE(r.engine_defect);
    ++checked;
  }
  CHECK(checked > 60);
}

TEST_CASE("property: decrease without annotation is never preserved") {
  Rng rng(38);
  for (int i = 0; i < 40; ++i) {
    const std::size_t k = 1 + rng.index(6), m = 1 + rng.index(6);
    const Program p = map_program(fmt::format("[[int]<{}>]<{}>", k, m),
                                  fmt::format("fn f :: [int]<{0}> -> [int]<{0}>\n"
                                              "fn f = prim reverse\n",
                                              k),
                                  "f");
    const Derivation d = derive(p, X(fmt::format("M ( S^-1 ) R^-1 {}", k)));
    REQUIRE_FALSE(d.verdict.guaranteed());
    REQUIRE_FALSE(verify(d, 20, rng.next()).engine_defect);
  }
}
