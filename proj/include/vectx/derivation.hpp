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

#ifndef VECTX_DERIVATION_HPP
#define VECTX_DERIVATION_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "vectx/program.hpp"
#include "vectx/runtime.hpp"
#include "vectx/type_algebra.hpp"
#include "vectx/value.hpp"

namespace vectx {

/**
 * A canonical reshaping of the outer two dimensions.
 *
 *   Increase(k)        R k . M S        [t]<N>        -> [[t]<k>]<N/k>
 *   Decrease(k)        M S^-1 . R^-1 k  [[t]<k>]<m>   -> [t]<k*m>
 *   Repartition(n, k)  R n . R^-1 k     [[t]<k>]<m>   -> [[t]<n>]<k*m/n>
 *
 * On a pair of vectors a step acts on both components.
 */
struct Step {
  enum class Kind { kIncrease, kDecrease, kRepartition };

  Kind kind = Kind::kIncrease;
  std::size_t k = 1;
  std::size_t n = 0;  // Repartition only: the new inner size

  static Step increase(std::size_t k) { return {Kind::kIncrease, k, 0}; }
  static Step decrease(std::size_t k) { return {Kind::kDecrease, k, 0}; }
  static Step repartition(std::size_t n, std::size_t k) { return {Kind::kRepartition, k, n}; }

  TypeTransform transform() const;

  friend bool operator==(const Step &, const Step &) = default;
};

std::string print_step(const Step &step);

// Applies a step to a type; pairs are handled componentwise.
VecType apply_step(const Step &step, const VecType &t);
// The transform equivalent to applying `steps` in order.
TypeTransform steps_transform(std::span<const Step> steps);

// apply_transform, but acting on both components of a top-level pair.
VecType apply_transform_pairwise(const TypeTransform &tr, const VecType &t);
Value apply_transform_value_pairwise(const TypeTransform &tr, const Value &v);

// Rewrites tr (as applied to t) into steps, in application order, such that
// applying them to t gives apply_transform(tr, t). Both t and its image must
// be vectors.
std::vector<Step> factor_transform(const TypeTransform &tr, const VecType &t);

struct Verdict {
  enum class Kind { kPreserved, kConditional, kUnknown };

  Kind kind = Kind::kPreserved;
  std::string condition;   // kConditional: the sufficient condition
  bool satisfied = false;  // kConditional: whether annotations establish it

  static Verdict preserved() { return {}; }
  static Verdict conditional(std::string condition, bool satisfied) {
    return {Kind::kConditional, std::move(condition), satisfied};
  }
  static Verdict unknown() { return {Kind::kUnknown, {}, false}; }

  // Preserved and satisfied conditions guarantee equal results.
  bool guaranteed() const { return kind == Kind::kPreserved || (kind == Kind::kConditional && satisfied); }

  friend bool operator==(const Verdict &, const Verdict &) = default;
};

// The weaker of two verdicts; conditions of conditional verdicts are merged.
Verdict weakest(const Verdict &a, const Verdict &b);
std::string print_verdict(const Verdict &v);

// Interns derived functions by name, renaming on conflicting definitions.
class FunctionPool {
 public:
  FunctionPool() = default;
  explicit FunctionPool(const std::vector<FnRef> &existing);

  FnRef intern(OpaqueFn f);
  const std::vector<FnRef> &functions() const { return functions_; }

 private:
  std::vector<FnRef> functions_;
};

// Result of pushing one step through one stage.
struct StepDerivation {
  std::vector<Stage> stages;          // replacement for the stage
  Verdict verdict;
  std::optional<Step> output_step;    // empty when the output is unchanged
  std::string rule;
  std::set<std::string> combinators;  // e.g. "reshapeTo 4", "toVector 3", "zipt'"
};

// `input` is the stage's input type before the step.
StepDerivation derive_map_step(const Step &step, const Stage &stage, const VecType &input,
                               FunctionPool &pool);
StepDerivation derive_fold_step(const Step &step, const Stage &stage, const VecType &input,
                                FunctionPool &pool);
// One step per vector argument; they must all be equal.
StepDerivation derive_zip_step(std::span<const Step> argument_steps, const Stage &stage,
                               const VecType &input, FunctionPool &pool);

struct StageRecord {
  std::string stage;
  std::string step;
  std::string rule;
  Verdict verdict;
};

struct Derivation {
  Program original;
  TypeTransform input_transform;
  std::vector<Step> input_steps;
  // Consumes the transformed input, produces the transformed result.
  Program derived;
  // `derived` between reshape wrappers: consumes the original input and
  // produces the original result.
  Program boundary;
  TypeTransform output_transform;
  std::vector<Step> output_steps;
  Verdict verdict;
  std::vector<StageRecord> records;
  std::set<std::string> combinators;
};

// Throws DerivationError (with the stage index) when a stage cannot absorb
// the transform.
Derivation derive(const Program &p, const TypeTransform &tr);

struct Counterexample {
  Value input;
  Value expected;  // original program
  Value actual;    // derived program, mapped back through the output transform
};

struct VerificationReport {
  std::size_t trials = 0;
  std::size_t passed = 0;
  std::uint64_t seed = 0;
  std::optional<Counterexample> first_failure;
  // A guaranteed verdict that failed a trial: a bug in the rules.
  bool engine_defect = false;

  bool all_passed() const { return passed == trials; }
};

VerificationReport verify(const Derivation &d, std::size_t trials, std::uint64_t seed,
                          const PrimitiveLibrary &lib = PrimitiveLibrary::standard());

// Compares two programs with the same input type on seeded random inputs.
VerificationReport compare_programs(const Program &expected, const Program &actual,
                                    std::size_t trials, std::uint64_t seed,
                                    const PrimitiveLibrary &lib = PrimitiveLibrary::standard());

// Human-readable report; `report` may be null.
std::string format_report(const Derivation &d, const VerificationReport *report);

}  // namespace vectx

#endif  // VECTX_DERIVATION_HPP
