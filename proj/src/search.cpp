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

#include "vectx/search.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>

#include "cursor.hpp"
#include "vectx/error.hpp"
#include "vectx/random.hpp"

namespace vectx {

CostModel CostModel::toy() {
  CostModel m;
  m.set("inner_width", 1.0);
  m.set("depth", 2.0);
  m.set("reshape_count", 0.5);
  return m;
}

void CostModel::set(std::string_view feature, double coefficient) {
  if (std::find(kFeatureNames.begin(), kFeatureNames.end(), feature) == kFeatureNames.end()) {
    throw TypeError(fmt::format("unknown cost feature '{}'", feature));
  }
  coefficients_.insert_or_assign(std::string(feature), coefficient);
}

double CostModel::coefficient(std::string_view feature) const {
  auto it = coefficients_.find(feature);
  return it == coefficients_.end() ? 0.0 : it->second;
}

double CostModel::evaluate(const Features &f) const {
  return coefficient("inner_width") * f.inner_width + coefficient("depth") * f.depth +
         coefficient("reshape_count") * f.reshape_count +
         coefficient("map_fold_levels") * f.map_fold_levels;
}

CostModel CostModel::parse(std::string_view text) {
  CostModel m;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    detail::Cursor cur(text.substr(start, end - start), line_no);
    start = end + 1;
    if (cur.at_end() || cur.peek() == '#') continue;
    const std::size_t key_at = cur.pos();
    if (cur.identifier() != "coefficient") cur.fail_at(key_at, "expected 'coefficient'");
    const std::size_t name_at = cur.pos();
    const std::string name = cur.identifier();
    if (std::find(kFeatureNames.begin(), kFeatureNames.end(), name) == kFeatureNames.end()) {
      cur.fail_at(name_at, fmt::format("unknown cost feature '{}'", name));
    }
    cur.skip_space();
    const std::string_view rest = cur.rest();
    double value = 0;
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), value);
    if (ec != std::errc() || !std::isfinite(value)) cur.fail("expected a real coefficient");
    std::string_view tail(ptr, static_cast<std::size_t>(rest.data() + rest.size() - ptr));
    if (tail.find_first_not_of(" \t\r") != std::string_view::npos) {
      cur.fail_at(cur.pos() + static_cast<std::size_t>(ptr - rest.data()), "unexpected trailing input");
    }
    m.set(name, value);
  }
  return m;
}

namespace {

void extend_shapes(std::size_t remaining, std::size_t slots, std::vector<std::size_t> &prefix,
                   std::vector<std::vector<std::size_t>> &out) {
  if (slots == 1) {
    // Outermost factor: must be >= 2 unless it is the only one.
    if (prefix.empty() || remaining >= 2) {
      prefix.push_back(remaining);
      out.push_back(prefix);
      prefix.pop_back();
    }
    return;
  }
  for (std::size_t f = 1; f <= remaining; ++f) {
    if (remaining % f != 0) continue;
    prefix.push_back(f);
    extend_shapes(remaining / f, slots - 1, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<std::vector<std::size_t>> shape_candidates(std::size_t n, std::size_t max_depth) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> prefix;
  for (std::size_t depth = 1; depth <= max_depth; ++depth) extend_shapes(n, depth, prefix, out);
  return out;
}

namespace {

double innermost_width(const VecType &t) {
  const VecType &v = t.is_tuple() ? t.first() : t;
  if (v.depth() < 2) return 1;
  return static_cast<double>(dimensions(v).front());
}

}  // namespace

Features features_of(const Derivation &d) {
  Features f;
  const VecType &input = d.derived.input.type;
  f.depth = static_cast<double>((input.is_tuple() ? input.first() : input).depth());
  const TypedProgram typed = typecheck(d.derived);
  f.inner_width = 1;
  for (const StageTyping &st : typed.stages) {
    f.inner_width = std::max(f.inner_width, innermost_width(st.input));
  }
  for (const Stage &s : d.boundary.pipeline_stages()) {
    if (s.kind == Stage::Kind::kReshapeTo || s.kind == Stage::Kind::kReshapeFrom) {
      f.reshape_count += 1;
    }
  }
  for (const Stage &s : d.derived.pipeline_stages()) {
    f.map_fold_levels += static_cast<double>(map_fold_levels(s));
  }
  return f;
}

double cost(const Variant &v, const CostModel &m) { return m.evaluate(v.features); }

std::vector<Variant> enumerate_variants(const Program &p, std::size_t max_depth,
                                        const CostModel &model) {
  typecheck(p);
  const VecType &input = p.input.type.is_tuple() ? p.input.type.first() : p.input.type;
  std::vector<Variant> out;
  for (std::vector<std::size_t> &dims : shape_candidates(total_size(input), max_depth)) {
    Variant v;
    v.target = with_dimensions(input.leaf(), dims);
    v.factors = std::move(dims);
    v.transform = path_between(input, v.target);
    try {
      v.derivation = derive(p, v.transform);
    } catch (const DerivationError &) {
      continue;
    }
    if (!v.derivation.verdict.guaranteed()) continue;
    v.features = features_of(v.derivation);
    v.cost = cost(v, model);
    out.push_back(std::move(v));
  }
  return out;
}

namespace {

std::vector<std::size_t> divisors_of(std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t d = 1; d <= n; ++d) {
    if (n % d == 0) out.push_back(d);
  }
  return out;
}

}  // namespace

AnnealResult anneal(std::span<const Variant> variants, const CostModel &model,
                    const AnnealSchedule &schedule, std::uint64_t seed) {
  if (variants.empty()) throw EmptySearchSpaceError("no admissible variants to search");
  std::map<std::vector<std::size_t>, std::size_t> by_shape;
  std::size_t slots = 1;
  for (std::size_t i = 0; i < variants.size(); ++i) {
    by_shape.emplace(variants[i].factors, i);
    slots = std::max(slots, variants[i].factors.size());
  }

  Rng rng(seed);
  auto propose = [&](std::size_t from) -> std::size_t {
    constexpr int kAttempts = 16;
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
      std::vector<std::size_t> g = variants[from].factors;
      g.resize(slots, 1);
      if (slots < 2) return from;
      const std::size_t i = rng.index(slots);
      std::size_t j = rng.index(slots - 1);
      if (j >= i) ++j;
      const std::size_t product = g[i] * g[j];
      const std::vector<std::size_t> ds = divisors_of(product);
      const std::size_t d = ds[rng.index(ds.size())];
      if (d == g[i]) continue;
      g[i] = d;
      g[j] = product / d;
      while (g.size() > 1 && g.back() == 1) g.pop_back();
      if (auto it = by_shape.find(g); it != by_shape.end() && it->second != from) {
        return it->second;
      }
    }
    return from;
  };

  AnnealResult result;
  std::size_t current = 0;
  double current_cost = model.evaluate(variants[current].features);
  double best_cost = current_cost;
  double temperature = schedule.initial_temperature;
  result.best_costs.reserve(schedule.iterations);
  for (std::size_t iter = 0; iter < schedule.iterations; ++iter) {
    const std::size_t candidate = propose(current);
    const double candidate_cost = model.evaluate(variants[candidate].features);
    const double delta = candidate_cost - current_cost;
    if (delta <= 0 || (temperature > 0 && rng.unit() < std::exp(-delta / temperature))) {
      current = candidate;
      current_cost = candidate_cost;
    }
    if (current_cost < best_cost) {
      best_cost = current_cost;
      result.index = current;
    }
    result.best_costs.push_back(best_cost);
    temperature *= schedule.cooling;
  }
  return result;
}

}  // namespace vectx
