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

#ifndef VECTX_SEARCH_HPP
#define VECTX_SEARCH_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vectx/derivation.hpp"
#include "vectx/program.hpp"
#include "vectx/type_algebra.hpp"

namespace vectx {

// The feature vector scored by a CostModel. This is a modelling choice of
// this library, not a hardware model:
//   inner_width      widest innermost dimension fed to any stage (1 if flat)
//   depth            dimensions of the transformed input
//   reshape_count    reshapeTo/reshapeFrom stages in the boundary program
//   map_fold_levels  total map/foldl nesting over all derived stages
struct Features {
  double inner_width = 0;
  double depth = 0;
  double reshape_count = 0;
  double map_fold_levels = 0;
};

inline constexpr std::array<std::string_view, 4> kFeatureNames = {
    "inner_width", "depth", "reshape_count", "map_fold_levels"};

struct Variant {
  std::vector<std::size_t> factors;  // dimensions of the target, innermost first
  VecType target;
  TypeTransform transform;
  Derivation derivation;
  Features features;
  double cost = 0;
};

class CostModel {
 public:
  CostModel() = default;

  // inner_width 1.0, depth 2.0, reshape_count 0.5.
  static CostModel toy();
  // Lines of `coefficient <feature> <real>`; `#` starts a comment.
  static CostModel parse(std::string_view text);

  void set(std::string_view feature, double coefficient);
  double coefficient(std::string_view feature) const;
  const std::map<std::string, double, std::less<>> &coefficients() const { return coefficients_; }

  double evaluate(const Features &f) const;

 private:
  std::map<std::string, double, std::less<>> coefficients_;
};

// Target dimension lists (innermost first) for a total size n: every ordered
// factorization into at most max_depth factors >= 1 whose outermost factor
// is >= 2 when there is more than one. A size-1 outer dimension is just a
// singleton lift of a shallower shape and is not enumerated separately.
std::vector<std::vector<std::size_t>> shape_candidates(std::size_t n, std::size_t max_depth);

Features features_of(const Derivation &d);
double cost(const Variant &v, const CostModel &m);

// One variant per shape candidate whose derivation is guaranteed to preserve
// the program. Costs are filled in with `model`.
std::vector<Variant> enumerate_variants(const Program &p, std::size_t max_depth,
                                        const CostModel &model = CostModel());

struct AnnealSchedule {
  double initial_temperature = 10.0;
  double cooling = 0.95;
  std::size_t iterations = 500;
};

struct AnnealResult {
  std::size_t index = 0;             // into the variant list
  std::vector<double> best_costs;    // best-seen cost after each iteration
};

// Seeded simulated annealing over the variant list, starting from the first
// variant. A move picks two dimensions and splits their product differently.
// Throws EmptySearchSpaceError on an empty list.
AnnealResult anneal(std::span<const Variant> variants, const CostModel &model,
                    const AnnealSchedule &schedule, std::uint64_t seed);

}  // namespace vectx

#endif  // VECTX_SEARCH_HPP
