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
#include <functional>
#include <set>

#include "vectx/error.hpp"
#include "vectx/search.hpp"

using namespace vectx;

namespace {

Program map_program(std::size_t n) {
  return parse_program(fmt::format(
      "input s :: [int]<{}>\nfn f :: int -> int\nfn f = prim triple\n"
      "stage g = map f\nresult r = g s\n",
      n));
}

// Distinct shapes of total size n with at most max_depth dimensions, where a
// shape with a size-1 outermost dimension counts as the shape beneath it.
std::set<std::vector<std::size_t>> brute_force_shapes(std::size_t n, std::size_t max_depth) {
  std::set<std::vector<std::size_t>> out;
  std::vector<std::size_t> dims;
  std::function<void(std::size_t)> rec = [&](std::size_t product) {
    if (!dims.empty() && product == n) {
      std::vector<std::size_t> s = dims;
      while (s.size() > 1 && s.back() == 1) s.pop_back();
      out.insert(s);
    }
    if (dims.size() == max_depth) return;
    for (std::size_t f = 1; f <= n; ++f) {
      if (product * f > n) break;
      dims.push_back(f);
      rec(product * f);
      dims.pop_back();
    }
  };
  rec(1);
  return out;
}

}  // namespace

TEST_CASE("shape candidates") {
  CHECK(shape_candidates(12, 2).size() == 6);
  CHECK(shape_candidates(1, 1) == std::vector<std::vector<std::size_t>>{{1}});
  CHECK(shape_candidates(1, 3) == std::vector<std::vector<std::size_t>>{{1}});
  for (std::size_t n = 1; n <= 64; ++n) {
    for (std::size_t depth = 1; depth <= 4; ++depth) {
      const auto got = shape_candidates(n, depth);
      const std::set<std::vector<std::size_t>> unique(got.begin(), got.end());
      CAPTURE(n);
      CAPTURE(depth);
      REQUIRE(unique.size() == got.size());
      REQUIRE(unique == brute_force_shapes(n, depth));
    }
  }
}

TEST_CASE("enumerate variants") {
  const std::vector<Variant> vs = enumerate_variants(map_program(12), 2);
  REQUIRE(vs.size() == 6);
  std::set<std::size_t> inner;
  for (const Variant &v : vs) {
    inner.insert(v.factors.front());
    CHECK(v.derivation.verdict.guaranteed());
    CHECK(v.derivation.derived.input.type == v.target);
  }
  CHECK(inner == std::set<std::size_t>{1, 2, 3, 4, 6, 12});

  const std::vector<Variant> one = enumerate_variants(map_program(1), 3);
  REQUIRE(one.size() == 1);
  CHECK(one[0].derivation.input_steps.empty());
}

TEST_CASE("inadmissible variants are dropped") {
  const Program p = parse_program(
      "input s :: [[int]<3>]<4>\nfn f :: [int]<3> -> [int]<3>\nfn f = prim reverse\n"
      "stage g = map f\nresult r = g s\n");
  for (const Variant &v : enumerate_variants(p, 3)) {
    CHECK(v.derivation.verdict.guaranteed());
  }
}

TEST_CASE("cost model") {
  const std::vector<Variant> vs = enumerate_variants(map_program(16), 2);
  CostModel zero;
  for (const Variant &v : vs) CHECK(cost(v, zero) == 0.0);

  CostModel width;
  width.set("inner_width", 1.0);
  const auto it = std::find_if(vs.begin(), vs.end(), [](const Variant &v) {
    return v.derivation.input_steps == std::vector<Step>{Step::increase(4)};
  });
  REQUIRE(it != vs.end());
  CHECK(cost(*it, width) == 4.0);

  const CostModel toy = CostModel::toy();
  CHECK(toy.coefficient("inner_width") == 1.0);
  CHECK(toy.coefficient("depth") == 2.0);
  CHECK(toy.coefficient("reshape_count") == 0.5);
  CHECK(toy.coefficient("map_fold_levels") == 0.0);
  for (const Variant &v : vs) {
    CHECK(cost(v, toy) == v.features.inner_width + 2 * v.features.depth +
                              0.5 * v.features.reshape_count);
  }
}

TEST_CASE("cost model files") {
  const CostModel m = CostModel::parse(
      "# toy\ncoefficient inner_width 1.5\n\ncoefficient depth -2e-1\n");
  CHECK(m.coefficient("inner_width") == 1.5);
  CHECK(m.coefficient("depth") == -0.2);
  CHECK_THROWS_AS(CostModel::parse("coefficient speed 1\n"), ParseError);
  CHECK_THROWS_AS(CostModel::parse("coefficient depth\n"), ParseError);
  CHECK_THROWS_AS(CostModel::parse("coefficient depth 1 2\n"), ParseError);
  CHECK_THROWS_AS(CostModel::parse("weight depth 1\n"), ParseError);
}

TEST_CASE("annealing") {
  CHECK_THROWS_AS(anneal({}, CostModel::toy(), {}, 1), EmptySearchSpaceError);

  const std::vector<Variant> single = enumerate_variants(map_program(1), 2);
  CHECK(anneal(single, CostModel::toy(), {}, 1).index == 0);

  const std::vector<Variant> vs = enumerate_variants(map_program(64), 3);
  AnnealSchedule none;
  none.iterations = 0;
  CHECK(anneal(vs, CostModel::toy(), none, 9).index == 0);

  CostModel wide;
  wide.set("inner_width", -1.0);
  wide.set("depth", 0.5);
  const AnnealResult a = anneal(vs, wide, {}, 17);
  const AnnealResult b = anneal(vs, wide, {}, 17);
  CHECK(a.index == b.index);
  CHECK(a.best_costs == b.best_costs);
  REQUIRE(a.best_costs.size() == 500);
  CHECK(std::is_sorted(a.best_costs.rbegin(), a.best_costs.rend()));
  CHECK(a.best_costs.back() == cost(vs[a.index], wide));

  const std::vector<Variant> sixty = enumerate_variants(map_program(60), 3);
  std::size_t best = 0;
  for (std::size_t i = 0; i < sixty.size(); ++i) {
    if (cost(sixty[i], wide) < cost(sixty[best], wide)) best = i;
  }
  CHECK(sixty[best].factors == std::vector<std::size_t>{30, 2});
  std::size_t hits = 0;
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    if (anneal(sixty, wide, {}, seed).index == best) ++hits;
  }
  CHECK(hits >= 19);
}
