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


#include "vectx/cli.hpp"

#include <fmt/format.h>

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "vectx/derivation.hpp"
#include "vectx/error.hpp"
#include "vectx/program.hpp"
#include "vectx/search.hpp"
#include "vectx/type_algebra.hpp"

namespace vectx::cli {
namespace {

using json = nlohmann::ordered_json;

int exit_code(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::kParse: return 1;
    case ErrorCategory::kType: return 2;
    case ErrorCategory::kDerivation: return 3;
    case ErrorCategory::kVerification: return 4;
    case ErrorCategory::kIo: return 5;
  }
  return 1;
}

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot read '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError(fmt::format("error reading '{}'", path));
  return ss.str();
}

void write_file(const std::string &path, const std::string &text) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError(fmt::format("cannot write '{}'", path));
  os << text;
  os.flush();
  if (!os) throw IoError(fmt::format("error writing '{}'", path));
}

Program load_program(const std::string &path) {
  Program p = parse_program(read_file(path));
  typecheck(p);
  return p;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t> &flag) {
  if (flag) return *flag;
  if (const char *env = std::getenv("VECTX_SEED"); env != nullptr && *env != '\0') {
    std::string_view s(env);
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw ParseError(fmt::format("VECTX_SEED is not an unsigned integer: '{}'", s), 0, 1);
    }
    return v;
  }
  return 0;
}

json verdict_json(const Verdict &v) {
  json j;
  switch (v.kind) {
    case Verdict::Kind::kPreserved: j["kind"] = "Preserved"; break;
    case Verdict::Kind::kConditional:
      j["kind"] = "ConditionallyPreserved";
      j["condition"] = v.condition;
      j["satisfied"] = v.satisfied;
      break;
    case Verdict::Kind::kUnknown: j["kind"] = "Unknown"; break;
  }
  return j;
}

json derivation_json(const Derivation &d) {
  json j;
  j["input"] = print_type(d.original.input.type);
  j["transform"] = print_transform(d.input_transform);
  json steps = json::array();
  for (const Step &s : d.input_steps) steps.push_back(print_step(s));
  j["steps"] = steps;
  j["derived_input"] = print_type(d.derived.input.type);
  j["output_transform"] = print_transform(d.output_transform);
  j["verdict"] = verdict_json(d.verdict);
  json stages = json::array();
  for (const StageRecord &r : d.records) {
    stages.push_back({{"stage", r.stage}, {"step", r.step}, {"rule", r.rule},
                      {"verdict", verdict_json(r.verdict)}});
  }
  j["stages"] = stages;
  j["combinators"] = d.combinators;
  return j;
}

json report_json(const VerificationReport &r) {
  json j;
  j["seed"] = r.seed;
  j["trials"] = r.trials;
  j["passed"] = r.passed;
  j["engine_defect"] = r.engine_defect;
  if (r.first_failure) {
    j["counterexample"] = {{"input", print_value(r.first_failure->input)},
                           {"expected", print_value(r.first_failure->expected)},
                           {"actual", print_value(r.first_failure->actual)}};
  } else {
    j["counterexample"] = nullptr;
  }
  return j;
}

std::string join(const std::vector<std::size_t> &v) {
  std::string s;
  for (std::size_t x : v) s += (s.empty() ? "" : "x") + std::to_string(x);
  return s;
}

struct Options {
  std::string format = "text";
  std::string transform;
  std::string type;
  std::string program;
  std::string derived;
  std::string output;
  std::string cost_model;
  std::size_t trials = 100;
  std::optional<std::uint64_t> seed;
  std::size_t max_depth = 2;
  AnnealSchedule schedule;
};

CostModel load_cost_model(const Options &o) {
  return o.cost_model.empty() ? CostModel::toy() : CostModel::parse(read_file(o.cost_model));
}

int cmd_type_apply(const Options &o, std::ostream &out) {
  const TypeTransform tr = parse_transform(o.transform);
  const VecType t = parse_type(o.type);
  const VecType r = apply_transform(tr, t);
  if (o.format == "structured") {
    json j{{"command", "type-apply"}, {"transform", print_transform(tr)},
           {"type", print_type(t)}, {"result", print_type(r)}};
    out << j.dump(2) << "\n";
  } else {
    out << print_type(r) << "\n";
  }
  return 0;
}

int cmd_derive(const Options &o, std::ostream &out) {
  const Program p = load_program(o.program);
  const Derivation d = derive(p, parse_transform(o.transform));
  const std::string text = print_program(d.boundary);
  if (!o.output.empty()) write_file(o.output, text);
  if (o.format == "structured") {
    json j{{"command", "derive"}, {"derivation", derivation_json(d)}};
    j["program"] = text;
    out << j.dump(2) << "\n";
  } else {
    if (o.output.empty()) out << text << "\n";
    out << format_report(d, nullptr);
  }
  return 0;
}

int cmd_verify(const Options &o, std::ostream &out) {
  const Program p = load_program(o.program);
  const std::uint64_t seed = resolve_seed(o.seed);
  if (!o.derived.empty()) {
    const Program q = load_program(o.derived);
    const VerificationReport r = compare_programs(p, q, o.trials, seed);
    if (o.format == "structured") {
      json j{{"command", "verify"}, {"mode", "derived"}, {"report", report_json(r)}};
      out << j.dump(2) << "\n";
    } else {
      out << fmt::format("seed {}: {}/{} trials passed\n", r.seed, r.passed, r.trials);
      if (r.first_failure) {
        out << "counterexample input " << print_value(r.first_failure->input) << "\n";
        out << "expected " << print_value(r.first_failure->expected) << "\n";
        out << "actual " << print_value(r.first_failure->actual) << "\n";
      }
    }
    return r.all_passed() ? 0 : 4;
  }
  const Derivation d = derive(p, parse_transform(o.transform));
  const VerificationReport r = verify(d, o.trials, seed);
  if (o.format == "structured") {
    json j{{"command", "verify"}, {"mode", "transform"}, {"derivation", derivation_json(d)},
           {"report", report_json(r)}};
    out << j.dump(2) << "\n";
  } else {
    out << format_report(d, &r);
  }
  return r.engine_defect ? 4 : 0;
}

int cmd_enumerate(const Options &o, std::ostream &out) {
  const Program p = load_program(o.program);
  const CostModel model = load_cost_model(o);
  const std::vector<Variant> vs = enumerate_variants(p, o.max_depth, model);
  if (o.format == "structured") {
    json rows = json::array();
    for (const Variant &v : vs) {
      rows.push_back({{"target", print_type(v.target)},
                      {"transform", print_transform(v.transform)},
                      {"verdict", verdict_json(v.derivation.verdict)},
                      {"features", {{"inner_width", v.features.inner_width},
                                    {"depth", v.features.depth},
                                    {"reshape_count", v.features.reshape_count},
                                    {"map_fold_levels", v.features.map_fold_levels}}},
                      {"cost", v.cost}});
    }
    json j{{"command", "enumerate"}, {"max_depth", o.max_depth}, {"variants", rows}};
    out << j.dump(2) << "\n";
    return 0;
  }
  out << "# features are this tool's own construction, not a hardware model\n";
  out << "# dims are listed innermost first\n";
  out << fmt::format("{:>3}  {:<10} {:<24} {:>5} {:>5} {:>8} {:>9} {:>8}  {}\n", "#", "dims",
                     "target", "width", "depth", "reshapes", "levels", "cost", "transform");
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const Variant &v = vs[i];
    out << fmt::format("{:>3}  {:<10} {:<24} {:>5} {:>5} {:>8} {:>9} {:>8.3f}  {}\n", i,
                       join(v.factors), print_type(v.target), v.features.inner_width,
                       v.features.depth, v.features.reshape_count, v.features.map_fold_levels,
                       v.cost, print_transform(v.transform));
  }
  out << fmt::format("{} variants\n", vs.size());
  return 0;
}

int cmd_optimize(const Options &o, std::ostream &out) {
  const Program p = load_program(o.program);
  const CostModel model = load_cost_model(o);
  const std::vector<Variant> vs = enumerate_variants(p, o.max_depth, model);
  const std::uint64_t seed = resolve_seed(o.seed);
  const AnnealResult a = anneal(vs, model, o.schedule, seed);
  const Variant &v = vs[a.index];
  const std::string text = print_program(v.derivation.boundary);
  if (!o.output.empty()) write_file(o.output, text);
  if (o.format == "structured") {
    json j{{"command", "optimize"},
           {"seed", seed},
           {"variants", vs.size()},
           {"chosen", {{"target", print_type(v.target)},
                       {"transform", print_transform(v.transform)},
                       {"cost", v.cost}}},
           {"derivation", derivation_json(v.derivation)},
           {"program", text}};
    out << j.dump(2) << "\n";
    return 0;
  }
  out << fmt::format("seed {}: {} admissible variants\n", seed, vs.size());
  out << fmt::format("chosen {} via {} (cost {:.3f})\n", print_type(v.target),
                     print_transform(v.transform), v.cost);
  if (o.output.empty()) out << text << "\n";
  out << format_report(v.derivation, nullptr);
  return 0;
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Derive reshaped map/foldl/zip pipelines from vector type transformations",
               "vectx"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--format", o.format, "text or structured")
      ->check(CLI::IsMember({"text", "structured"}));

  CLI::App *type_apply = app.add_subcommand("type-apply", "apply a transform to a vector type");
  type_apply->add_option("transform", o.transform, "transform, e.g. \"R 4 M ( S )\"")->required();
  type_apply->add_option("type", o.type, "type, e.g. [a]<16>")->required();

  CLI::App *derive_cmd = app.add_subcommand("derive", "derive a transformed program");
  derive_cmd->add_option("program", o.program, "program file")->required();
  derive_cmd->add_option("-t,--transform", o.transform, "input type transform")->required();
  derive_cmd->add_option("-o,--output", o.output, "write the derived program here");

  CLI::App *verify_cmd = app.add_subcommand("verify", "check a derivation on random inputs");
  verify_cmd->add_option("program", o.program, "program file")->required();
  auto *vt = verify_cmd->add_option("-t,--transform", o.transform, "input type transform");
  auto *vd = verify_cmd->add_option("-d,--derived", o.derived, "derived program file");
  vt->excludes(vd);
  verify_cmd->add_option("--trials", o.trials, "number of random trials");
  verify_cmd->add_option("--seed", o.seed, "random seed (default: $VECTX_SEED, else 0)");

  CLI::App *enum_cmd = app.add_subcommand("enumerate", "list admissible variants");
  enum_cmd->add_option("program", o.program, "program file")->required();
  enum_cmd->add_option("--max-depth", o.max_depth, "maximum dimensions")
      ->check(CLI::PositiveNumber);
  enum_cmd->add_option("--cost-model", o.cost_model, "cost model file");

  CLI::App *opt_cmd = app.add_subcommand("optimize", "pick a variant by simulated annealing");
  opt_cmd->add_option("program", o.program, "program file")->required();
  opt_cmd->add_option("--max-depth", o.max_depth, "maximum dimensions")
      ->check(CLI::PositiveNumber);
  opt_cmd->add_option("--cost-model", o.cost_model, "cost model file");
  opt_cmd->add_option("--seed", o.seed, "random seed (default: $VECTX_SEED, else 0)");
  opt_cmd->add_option("--t0", o.schedule.initial_temperature, "initial temperature");
  opt_cmd->add_option("--alpha", o.schedule.cooling, "geometric cooling factor");
  opt_cmd->add_option("--iterations", o.schedule.iterations, "annealing iterations");
  opt_cmd->add_option("-o,--output", o.output, "write the derived program here");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError &e) {
    err << "error[parse]: UsageError: " << e.what() << "\n";
    return 1;
  }

  try {
    if (verify_cmd->parsed() && o.transform.empty() && o.derived.empty()) {
      throw ParseError("verify needs --transform or --derived", 0, 1);
    }
    if (type_apply->parsed()) return cmd_type_apply(o, out);
    if (derive_cmd->parsed()) return cmd_derive(o, out);
    if (verify_cmd->parsed()) return cmd_verify(o, out);
    if (enum_cmd->parsed()) return cmd_enumerate(o, out);
    return cmd_optimize(o, out);
  } catch (const Error &e) {
    err << "error[" << category_name(e.category()) << "]: " << e.kind() << ": " << e.what()
        << "\n";
    return exit_code(e.category());
  }
}

}  // namespace vectx::cli
