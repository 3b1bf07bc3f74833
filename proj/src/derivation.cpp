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

#include "vectx/derivation.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <map>
#include <stdexcept>
#include <utility>

#include "vectx/error.hpp"

namespace vectx {

// --- Steps ---

TypeTransform Step::transform() const {
  const TypeOp lift = TypeOp::map(TypeTransform({TypeOp::singleton()}));
  const TypeOp drop = TypeOp::map(TypeTransform({TypeOp::singleton_inv()}));
  switch (kind) {
    case Kind::kIncrease: return TypeTransform({TypeOp::reshape(k), lift});
    case Kind::kDecrease: return TypeTransform({drop, TypeOp::reshape_inv(k)});
    case Kind::kRepartition: return TypeTransform({TypeOp::reshape(n), TypeOp::reshape_inv(k)});
  }
  return {};
}

std::string print_step(const Step &step) {
  switch (step.kind) {
    case Step::Kind::kIncrease: return fmt::format("Increase({})", step.k);
    case Step::Kind::kDecrease: return fmt::format("Decrease({})", step.k);
    case Step::Kind::kRepartition: return fmt::format("Repartition({}, {})", step.n, step.k);
  }
  return {};
}

VecType apply_transform_pairwise(const TypeTransform &tr, const VecType &t) {
  if (t.is_tuple()) {
    return VecType::tuple(apply_transform(tr, t.first()), apply_transform(tr, t.second()));
  }
  return apply_transform(tr, t);
}

Value apply_transform_value_pairwise(const TypeTransform &tr, const Value &v) {
  if (v.is_tuple()) {
    return Value::tuple(apply_transform_value(tr, v.first()),
                        apply_transform_value(tr, v.second()));
  }
  return apply_transform_value(tr, v);
}

VecType apply_step(const Step &step, const VecType &t) {
  return apply_transform_pairwise(step.transform(), t);
}

TypeTransform steps_transform(std::span<const Step> steps) {
  TypeTransform tr;
  for (const Step &s : steps) tr = compose(s.transform(), tr);
  return tr;
}

namespace {

// Removes adjacent inverse pairs, then fuses Decrease(k) . Increase(n) into
// Repartition(n, k).
std::vector<Step> simplify_steps(std::vector<Step> steps) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + 1 < steps.size(); ++i) {
      const Step &a = steps[i];
      const Step &b = steps[i + 1];
      const bool cancels = a.k == b.k && ((a.kind == Step::Kind::kDecrease && b.kind == Step::Kind::kIncrease) ||
                                          (a.kind == Step::Kind::kIncrease && b.kind == Step::Kind::kDecrease));
      if (cancels) {
        steps.erase(steps.begin() + static_cast<std::ptrdiff_t>(i),
                    steps.begin() + static_cast<std::ptrdiff_t>(i + 2));
        changed = true;
        break;
      }
    }
  }
  std::vector<Step> out;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (i + 1 < steps.size() && steps[i].kind == Step::Kind::kDecrease &&
        steps[i + 1].kind == Step::Kind::kIncrease) {
      out.push_back(Step::repartition(steps[i + 1].k, steps[i].k));
      ++i;
    } else {
      out.push_back(steps[i]);
    }
  }
  return out;
}

}  // namespace

std::vector<Step> factor_transform(const TypeTransform &tr, const VecType &t) {
  const VecType target = apply_transform(tr, t);
  if (target == t) return {};
  if (total_size(target) != total_size(t)) {
    throw DerivationError(fmt::format("transform {} changes the total size of {}",
                                      print_transform(tr), print_type(t)));
  }
  if (!t.is_vec() || !target.is_vec()) {
    throw DerivationError(fmt::format("cannot factor a transform from {} to {}: both must be vectors",
                                      print_type(t), print_type(target)));
  }
  std::vector<Step> steps;
  // Flatten the source one outer pair at a time.
  for (VecType cur = t; cur.element().is_vec(); cur = apply_step(steps.back(), cur)) {
    steps.push_back(Step::decrease(cur.element().size()));
  }
  // Rebuild the target from its innermost dimension outwards.
  const std::vector<std::size_t> dims = dimensions(target);
  for (std::size_t i = 0; i + 1 < dims.size(); ++i) steps.push_back(Step::increase(dims[i]));
  steps = simplify_steps(std::move(steps));

  VecType check = t;
  for (const Step &s : steps) check = apply_step(s, check);
  if (check != target) {
    throw std::logic_error(fmt::format("factor_transform reproduced {} instead of {}",
                                       print_type(check), print_type(target)));
  }
  return steps;
}

// --- Verdicts ---

namespace {

int strength(const Verdict &v) {
  switch (v.kind) {
    case Verdict::Kind::kPreserved: return 3;
    case Verdict::Kind::kConditional: return v.satisfied ? 2 : 1;
    case Verdict::Kind::kUnknown: return 0;
  }
  return 0;
}

}  // namespace

Verdict weakest(const Verdict &a, const Verdict &b) {
  if (a.kind == Verdict::Kind::kConditional && b.kind == Verdict::Kind::kConditional) {
    std::string condition = a.condition;
    if (b.condition != a.condition) condition += "; " + b.condition;
    return Verdict::conditional(std::move(condition), a.satisfied && b.satisfied);
  }
  return strength(a) <= strength(b) ? a : b;
}

std::string print_verdict(const Verdict &v) {
  switch (v.kind) {
    case Verdict::Kind::kPreserved: return "Preserved";
    case Verdict::Kind::kConditional:
      return fmt::format("ConditionallyPreserved({}, {})", v.condition,
                         v.satisfied ? "satisfied" : "unsatisfied");
    case Verdict::Kind::kUnknown: return "Unknown";
  }
  return {};
}

// --- Function pool ---

FunctionPool::FunctionPool(const std::vector<FnRef> &existing) : functions_(existing) {}

namespace {

bool same_definition(const OpaqueFn &a, const OpaqueFn &b) {
  return a.signature == b.signature && a.form == b.form && a.primitive == b.primitive &&
         a.width == b.width && (a.inner == nullptr) == (b.inner == nullptr) &&
         (a.inner == nullptr || a.inner->name == b.inner->name);
}

}  // namespace

FnRef FunctionPool::intern(OpaqueFn f) {
  const std::string base = f.name;
  for (int suffix = 2;; ++suffix) {
    auto it = std::find_if(functions_.begin(), functions_.end(),
                           [&](const FnRef &g) { return g->name == f.name; });
    if (it == functions_.end()) break;
    if (same_definition(**it, f)) return *it;
    f.name = fmt::format("{}_{}", base, suffix);
  }
  auto ref = std::make_shared<const OpaqueFn>(std::move(f));
  functions_.push_back(ref);
  return ref;
}

// --- Per-stage rules ---

namespace {

OpaqueFn derived_fn(std::string name, FnSignature sig, FnForm form, FnRef inner,
                    std::size_t width = 0) {
  OpaqueFn f;
  f.name = std::move(name);
  f.signature = std::move(sig);
  f.form = form;
  f.inner = std::move(inner);
  f.width = width;
  return f;
}

VecType checked_step(const Step &step, const VecType &input, const Stage &stage) {
  try {
    return apply_step(step, input);
  } catch (const Error &e) {
    throw DerivationError(fmt::format("{} does not apply to the input {} of stage '{}': {}",
                                      print_step(step), print_type(input), stage.name, e.what()));
  }
}

void add_reshape_names(std::set<std::string> &out, const std::vector<Stage> &stages) {
  for (const Stage &s : stages) {
    if (s.kind == Stage::Kind::kReshapeTo) out.insert(fmt::format("reshapeTo {}", s.width));
    if (s.kind == Stage::Kind::kReshapeFrom) out.insert(fmt::format("reshapeFrom {}", s.width));
  }
}

// Stages taking the original layout to the stepped one.
std::vector<Stage> forward_wrappers(const Step &step) {
  switch (step.kind) {
    case Step::Kind::kIncrease: return {Stage::reshape_to("", step.k)};
    case Step::Kind::kDecrease: return {Stage::reshape_from("", step.k)};
    case Step::Kind::kRepartition:
      return {Stage::reshape_from("", step.k), Stage::reshape_to("", step.n)};
  }
  return {};
}

// Stages taking the stepped layout back to the original one.
std::vector<Stage> inverse_wrappers(const Step &step) {
  switch (step.kind) {
    case Step::Kind::kIncrease: return {Stage::reshape_from("", step.k)};
    case Step::Kind::kDecrease: return {Stage::reshape_to("", step.k)};
    case Step::Kind::kRepartition:
      return {Stage::reshape_from("", step.n), Stage::reshape_to("", step.k)};
  }
  return {};
}

// Undo the step, then run the original stage. Always exact; the output is
// unchanged.
StepDerivation conjugate(const Step &step, const Stage &stage) {
  StepDerivation d;
  d.stages = inverse_wrappers(step);
  for (Stage &s : d.stages) s.name = stage.name;
  d.stages.push_back(stage);
  d.verdict = Verdict::preserved();
  d.rule = "conjugate";
  add_reshape_names(d.combinators, d.stages);
  return d;
}

struct Lowered {
  FnRef fn;
  Verdict verdict;
  bool wrapped = false;
};

// The k-to-element lowering shared by Decrease and Repartition. Uses h
// directly when f = map h (or foldl h) is declared, otherwise the
// toVector/fromVector wrapper.
Lowered lower_map_fn(const FnRef &f, std::size_t k, FunctionPool &pool) {
  const FnSignature &sig = f->signature;
  const VecType &in = sig.params[0];
  const VecType &out = sig.result;
  if (!in.is_vec() || !out.is_vec() || in.size() != k || out.size() != k) {
    throw DerivationError(fmt::format("lowering by {} needs {} :: [t1]<{}> -> [t2]<{}>, got {}", k,
                                      f->name, k, k, print_signature(sig)));
  }
  if (const OpaqueFn *h = f->elementwise_of()) {
    return {f->inner, Verdict::conditional(fmt::format("{} = map {}", f->name, h->name), true)};
  }
  FnRef lowered = pool.intern(derived_fn(fmt::format("narrow{}_{}", k, f->name),
                                         {{in.element()}, out.element()}, FnForm::kNarrow, f, k));
  return {lowered, Verdict::conditional(fmt::format("{} = map h", f->name), false), true};
}

Lowered lower_fold_fn(const FnRef &f, std::size_t k, FunctionPool &pool) {
  const FnSignature &sig = f->signature;
  const VecType &chunk = sig.params[1];
  if (!chunk.is_vec() || chunk.size() != k) {
    throw DerivationError(fmt::format("lowering by {} needs {} :: b -> [t]<{}> -> b, got {}", k,
                                      f->name, k, print_signature(sig)));
  }
  if (const OpaqueFn *h = f->fold_of()) {
    return {f->inner, Verdict::conditional(fmt::format("{} = foldl {}", f->name, h->name), true)};
  }
  FnRef lowered = pool.intern(derived_fn(fmt::format("narrowfold{}_{}", k, f->name),
                                         {{sig.result, chunk.element()}, sig.result},
                                         FnForm::kNarrowFold, f, k));
  return {lowered, Verdict::conditional(fmt::format("{} = fold h", f->name), false), true};
}

}  // namespace

StepDerivation derive_map_step(const Step &step, const Stage &stage, const VecType &input,
                               FunctionPool &pool) {
  if (stage.kind != Stage::Kind::kMap) {
    throw DerivationError(fmt::format("stage '{}' is not a map", stage.name));
  }
  checked_step(step, input, stage);
  const FnRef &f = stage.fn;
  const FnSignature &sig = f->signature;
  StepDerivation d;
  d.output_step = step;
  switch (step.kind) {
    case Step::Kind::kIncrease: {
      FnRef lifted = pool.intern(derived_fn(
          "map_" + f->name,
          {{VecType::vec(step.k, sig.params[0])}, VecType::vec(step.k, sig.result)},
          FnForm::kElementwise, f));
      d.stages = {Stage::map(stage.name, lifted)};
      d.verdict = Verdict::preserved();
      d.rule = "map/increase: map (map f)";
      break;
    }
    case Step::Kind::kDecrease: {
      Lowered low = lower_map_fn(f, step.k, pool);
      d.stages = {Stage::map(stage.name, low.fn)};
      d.verdict = low.verdict;
      d.rule = low.wrapped ? "map/decrease: fromVector . f . toVector" : "map/decrease: map h";
      if (low.wrapped) {
        d.combinators.insert(fmt::format("toVector {}", step.k));
        d.combinators.insert(fmt::format("fromVector {}", step.k));
      }
      break;
    }
    case Step::Kind::kRepartition: {
      Lowered low = lower_map_fn(f, step.k, pool);
      const FnSignature &ls = low.fn->signature;
      FnRef regrouped = pool.intern(derived_fn(
          "map_" + low.fn->name,
          {{VecType::vec(step.n, ls.params[0])}, VecType::vec(step.n, ls.result)},
          FnForm::kElementwise, low.fn));
      d.stages = {Stage::map(stage.name, regrouped)};
      d.verdict = low.verdict;
      d.rule = low.wrapped ? "map/repartition: map (fromVector . f . toVector)"
                           : "map/repartition: map (map h)";
      if (low.wrapped) {
        d.combinators.insert(fmt::format("toVector {}", step.k));
        d.combinators.insert(fmt::format("fromVector {}", step.k));
      }
      break;
    }
  }
  return d;
}

StepDerivation derive_fold_step(const Step &step, const Stage &stage, const VecType &input,
                                FunctionPool &pool) {
  if (stage.kind != Stage::Kind::kFold) {
    throw DerivationError(fmt::format("stage '{}' is not a foldl", stage.name));
  }
  checked_step(step, input, stage);
  const FnRef &f = stage.fn;
  const FnSignature &sig = f->signature;
  StepDerivation d;
  // The fold result b is opaque to the transform: it is left unchanged.
  d.output_step = std::nullopt;
  switch (step.kind) {
    case Step::Kind::kIncrease: {
      FnRef nested = pool.intern(derived_fn(
          "foldl_" + f->name, {{sig.result, VecType::vec(step.k, sig.params[1])}, sig.result},
          FnForm::kFoldOf, f));
      d.stages = {Stage::fold(stage.name, nested, stage.acc)};
      d.verdict = Verdict::preserved();
      d.rule = "fold/increase: foldl (foldl f)";
      break;
    }
    case Step::Kind::kDecrease: {
      Lowered low = lower_fold_fn(f, step.k, pool);
      d.stages = {Stage::fold(stage.name, low.fn, stage.acc)};
      d.verdict = low.verdict;
      d.rule = low.wrapped ? "fold/decrease: \\acc x -> f acc (toVector x)" : "fold/decrease: foldl h";
      if (low.wrapped) d.combinators.insert(fmt::format("toVector {}", step.k));
      break;
    }
    case Step::Kind::kRepartition: {
      Lowered low = lower_fold_fn(f, step.k, pool);
      const FnSignature &ls = low.fn->signature;
      FnRef nested = pool.intern(derived_fn(
          "foldl_" + low.fn->name,
          {{ls.result, VecType::vec(step.n, ls.params[1])}, ls.result}, FnForm::kFoldOf, low.fn));
      d.stages = {Stage::fold(stage.name, nested, stage.acc)};
      d.verdict = low.verdict;
      d.rule = low.wrapped ? "fold/repartition: foldl (\\acc x -> f acc (toVector x))"
                           : "fold/repartition: foldl (foldl h)";
      if (low.wrapped) d.combinators.insert(fmt::format("toVector {}", step.k));
      break;
    }
  }
  return d;
}

StepDerivation derive_zip_step(std::span<const Step> argument_steps, const Stage &stage,
                               const VecType &input, FunctionPool &pool) {
  const bool zipping = stage.kind == Stage::Kind::kZip || stage.kind == Stage::Kind::kZipt;
  const bool unzipping = stage.kind == Stage::Kind::kUnzip || stage.kind == Stage::Kind::kUnzipt;
  if (!zipping && !unzipping) {
    throw DerivationError(fmt::format("stage '{}' is not a zip or unzip", stage.name));
  }
  if (argument_steps.empty()) throw DerivationError("zip derivation needs a step per argument");
  for (const Step &s : argument_steps) {
    if (s != argument_steps.front()) {
      throw DerivationError(fmt::format(
          "stage '{}': every zipped argument must be transformed the same way ({} vs {})",
          stage.name, print_step(argument_steps.front()), print_step(s)));
    }
  }
  const Step &step = argument_steps.front();
  checked_step(step, input, stage);
  if (step.kind != Step::Kind::kIncrease) return conjugate(step, stage);

  StepDerivation d;
  d.output_step = step;
  d.verdict = Verdict::preserved();
  const std::size_t k = step.k;
  if (zipping) {
    const VecType a = VecType::vec(k, input.first().element());
    const VecType b = VecType::vec(k, input.second().element());
    OpaqueFn z = derived_fn(fmt::format("zipt{}", k),
                            {{VecType::tuple(a, b)},
                             VecType::vec(k, VecType::tuple(a.element(), b.element()))},
                            FnForm::kPrimitive, nullptr);
    z.primitive = "zipt";
    FnRef inner = pool.intern(std::move(z));
    d.stages = {stage, Stage::map(stage.name, inner)};
    d.rule = "zip/increase: zipt' = map zipt . zipt";
    d.combinators.insert("zipt'");
  } else {
    const VecType &pair = input.element();
    OpaqueFn u = derived_fn(fmt::format("unzipt{}", k),
                            {{VecType::vec(k, pair)},
                             VecType::tuple(VecType::vec(k, pair.first()),
                                            VecType::vec(k, pair.second()))},
                            FnForm::kPrimitive, nullptr);
    u.primitive = "unzipt";
    FnRef inner = pool.intern(std::move(u));
    d.stages = {Stage::map(stage.name, inner), stage};
    d.rule = "unzip/increase: unzipt' = unzipt . map unzipt";
    d.combinators.insert("unzipt'");
  }
  return d;
}

// --- Whole programs ---

namespace {

StepDerivation derive_stage(const Step &step, const Stage &stage, const VecType &input,
                            FunctionPool &pool) {
  switch (stage.kind) {
    case Stage::Kind::kMap: return derive_map_step(step, stage, input, pool);
    case Stage::Kind::kFold: return derive_fold_step(step, stage, input, pool);
    case Stage::Kind::kZip:
    case Stage::Kind::kZipt: {
      const Step both[2] = {step, step};
      return derive_zip_step(both, stage, input, pool);
    }
    case Stage::Kind::kUnzip:
    case Stage::Kind::kUnzipt: return derive_zip_step(std::span(&step, 1), stage, input, pool);
    case Stage::Kind::kReshapeTo:
    case Stage::Kind::kReshapeFrom:
      checked_step(step, input, stage);
      return conjugate(step, stage);
    case Stage::Kind::kComposed: break;
  }
  throw DerivationError(fmt::format("stage '{}' must be flattened before derivation", stage.name));
}

struct Item {
  Stage stage;
  std::size_t origin;
  bool touched;
};

void flatten_into(const Stage &s, std::size_t origin, std::vector<Item> &out) {
  if (s.kind == Stage::Kind::kComposed) {
    for (const Stage &part : s.parts) flatten_into(part, origin, out);
    return;
  }
  out.push_back({s, origin, false});
}

class UniqueNames {
 public:
  std::string take(const std::string &wanted) {
    std::string name = wanted;
    for (int i = 2; used_.count(name); ++i) name = fmt::format("{}{}", wanted, i);
    used_.insert(name);
    return name;
  }

 private:
  std::set<std::string> used_;
};

std::vector<Stage> wrapper_stages(std::span<const Step> steps, bool inverse) {
  std::vector<Stage> out;
  if (!inverse) {
    for (const Step &s : steps) {
      for (Stage &w : forward_wrappers(s)) out.push_back(std::move(w));
    }
  } else {
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
      for (Stage &w : inverse_wrappers(*it)) out.push_back(std::move(w));
    }
  }
  return out;
}

std::string wrapper_name(const Stage &s) {
  return fmt::format("{}{}", s.kind == Stage::Kind::kReshapeTo ? "to" : "from", s.width);
}

}  // namespace

Derivation derive(const Program &p, const TypeTransform &tr) {
  const TypedProgram typed = typecheck(p);
  const VecType &input_type = p.input.type;

  Derivation d;
  d.original = p;
  d.input_transform = tr;
  d.verdict = Verdict::preserved();

  VecType transformed_input;
  try {
    transformed_input = apply_transform_pairwise(tr, input_type);
  } catch (const Error &e) {
    throw DerivationError(fmt::format("transform {} does not apply to input type {}: {}",
                                      print_transform(tr), print_type(input_type), e.what()));
  }
  if (input_type.is_tuple()) {
    std::vector<Step> first = factor_transform(tr, input_type.first());
    std::vector<Step> second = factor_transform(tr, input_type.second());
    if (first != second) {
      throw DerivationError(fmt::format(
          "transform {} acts differently on the two components of {}; zipped arguments must "
          "be transformed the same way",
          print_transform(tr), print_type(input_type)));
    }
    d.input_steps = std::move(first);
  } else {
    d.input_steps = factor_transform(tr, input_type);
  }

  if (d.input_steps.empty()) {
    d.derived = p;
    d.boundary = p;
    return d;
  }

  std::vector<Item> items;
  for (std::size_t i = 0; i < p.pipeline.size(); ++i) flatten_into(p.stage(p.pipeline[i]), i, items);

  FunctionPool pool(p.functions);
  VecType stepped_input = input_type;
  for (const Step &step : d.input_steps) {
    std::optional<Step> ctx = step;
    VecType cur = stepped_input;
    std::vector<Item> next;
    for (const Item &item : items) {
      const VecType out = stage_output(item.stage, cur);
      if (!ctx) {
        next.push_back(item);
        cur = out;
        continue;
      }
      StepDerivation sd;
      try {
        sd = derive_stage(*ctx, item.stage, cur, pool);
      } catch (const DerivationError &e) {
        throw DerivationError(fmt::format("stage {} ('{}'): {}", item.origin, item.stage.name, e.what()));
      }
      d.records.push_back({item.stage.name, print_step(*ctx), sd.rule, sd.verdict});
      d.verdict = weakest(d.verdict, sd.verdict);
      d.combinators.insert(sd.combinators.begin(), sd.combinators.end());
      for (Stage &s : sd.stages) next.push_back({std::move(s), item.origin, true});
      ctx = sd.output_step;
      cur = out;
    }
    if (ctx) d.output_steps.push_back(*ctx);
    items = std::move(next);
    stepped_input = apply_step(step, stepped_input);
  }
  d.output_transform = steps_transform(d.output_steps);

  // Name the derived stages after the stage they came from.
  UniqueNames names;
  names.take(p.input.name);
  names.take(p.input.name + "'");
  std::map<std::size_t, std::size_t> per_origin;
  for (const Item &item : items) ++per_origin[item.origin];
  std::map<std::size_t, std::size_t> seen;
  std::vector<Stage> core;
  for (Item &item : items) {
    const std::string &base = p.pipeline[item.origin];
    const std::size_t index = ++seen[item.origin];
    std::string wanted = base;
    if (item.touched || per_origin[item.origin] > 1) {
      wanted = per_origin[item.origin] == 1 ? base + "'" : fmt::format("{}'{}", base, index);
    }
    item.stage.name = names.take(wanted);
    core.push_back(item.stage);
  }

  d.derived.input = {p.input.name + "'", transformed_input};
  d.derived.functions = pool.functions();
  d.derived.stages = core;
  for (const Stage &s : core) d.derived.pipeline.push_back(s.name);
  d.derived.result_name = p.result_name + "'";

  std::vector<Stage> before = wrapper_stages(d.input_steps, false);
  std::vector<Stage> after = wrapper_stages(d.output_steps, true);
  for (Stage &s : before) s.name = names.take("in_" + wrapper_name(s));
  for (Stage &s : after) s.name = names.take("out_" + wrapper_name(s));
  add_reshape_names(d.combinators, before);
  add_reshape_names(d.combinators, after);

  d.boundary.input = p.input;
  d.boundary.functions = d.derived.functions;
  d.boundary.result_name = p.result_name;
  for (const auto *group : {&before, &core, &after}) {
    for (const Stage &s : *group) {
      d.boundary.stages.push_back(s);
      d.boundary.pipeline.push_back(s.name);
    }
  }

  // Type-level soundness of the result.
  const TypedProgram derived_typed = typecheck(d.derived);
  const VecType expected_result = apply_transform_pairwise(d.output_transform, typed.result);
  if (derived_typed.result != expected_result) {
    throw std::logic_error(fmt::format("derived result type {} differs from expected {}",
                                       print_type(derived_typed.result), print_type(expected_result)));
  }
  if (typecheck(d.boundary).result != typed.result) {
    throw std::logic_error("boundary program does not reproduce the original result type");
  }
  return d;
}

// --- Verification ---

VerificationReport verify(const Derivation &d, std::size_t trials, std::uint64_t seed,
                          const PrimitiveLibrary &lib) {
  VerificationReport report;
  report.trials = trials;
  report.seed = seed;
  const TypeTransform back = invert_transform(d.output_transform);
  Rng rng(seed);
  for (std::size_t i = 0; i < trials; ++i) {
    const Value input = random_value(d.original.input.type, rng);
    const Value expected = eval(d.original, input, lib);
    const Value stepped = apply_transform_value_pairwise(d.input_transform, input);
    const Value actual = apply_transform_value_pairwise(back, eval(d.derived, stepped, lib));
    if (actual == expected && eval(d.boundary, input, lib) == expected) {
      ++report.passed;
    } else if (!report.first_failure) {
      report.first_failure = Counterexample{input, expected, actual};
    }
  }
  report.engine_defect = d.verdict.guaranteed() && !report.all_passed();
  return report;
}

VerificationReport compare_programs(const Program &expected, const Program &actual,
                                    std::size_t trials, std::uint64_t seed,
                                    const PrimitiveLibrary &lib) {
  if (expected.input.type != actual.input.type) {
    throw TypeError(fmt::format("programs take different inputs: {} vs {}",
                                print_type(expected.input.type), print_type(actual.input.type)));
  }
  VerificationReport report;
  report.trials = trials;
  report.seed = seed;
  Rng rng(seed);
  for (std::size_t i = 0; i < trials; ++i) {
    const Value input = random_value(expected.input.type, rng);
    Value want = eval(expected, input, lib);
    Value got = eval(actual, input, lib);
    if (want == got) {
      ++report.passed;
    } else if (!report.first_failure) {
      report.first_failure = Counterexample{input, std::move(want), std::move(got)};
    }
  }
  return report;
}

std::string format_report(const Derivation &d, const VerificationReport *report) {
  const TypedProgram original = typecheck(d.original);
  const TypedProgram derived = typecheck(d.derived);
  std::string out;
  out += "derivation\n";
  out += fmt::format("  input             {} :: {}\n", d.original.input.name,
                     print_type(d.original.input.type));
  out += fmt::format("  transform         {}\n", print_transform(d.input_transform));
  std::string steps;
  for (const Step &s : d.input_steps) steps += (steps.empty() ? "" : ", ") + print_step(s);
  out += fmt::format("  steps             {}\n", steps.empty() ? "none" : steps);
  out += fmt::format("  derived input     {} :: {}\n", d.derived.input.name,
                     print_type(d.derived.input.type));
  out += fmt::format("  result            {} :: {}\n", d.original.result_name,
                     print_type(original.result));
  out += fmt::format("  derived result    {} :: {}\n", d.derived.result_name,
                     print_type(derived.result));
  out += fmt::format("  output transform  {}\n", print_transform(d.output_transform));
  out += fmt::format("  verdict           {}\n", print_verdict(d.verdict));
  out += "stages\n";
  if (d.records.empty()) out += "  (unchanged)\n";
  for (const StageRecord &r : d.records) {
    out += fmt::format("  {}  {}  {}  {}\n", r.stage, r.step, r.rule, print_verdict(r.verdict));
  }
  out += "combinators\n";
  if (d.combinators.empty()) out += "  (none)\n";
  for (const std::string &c : d.combinators) out += "  " + c + "\n";
  if (report != nullptr) {
    out += "verification\n";
    out += fmt::format("  seed {}: {}/{} trials passed\n", report->seed, report->passed,
                       report->trials);
    if (report->first_failure) {
      const Counterexample &c = *report->first_failure;
      out += fmt::format("  counterexample input {}\n", print_value(c.input));
      out += fmt::format("  expected {}\n", print_value(c.expected));
      out += fmt::format("  actual {}\n", print_value(c.actual));
    }
    if (report->engine_defect) out += "  DEFECT: a guaranteed verdict failed verification\n";
  }
  return out;
}

}  // namespace vectx
