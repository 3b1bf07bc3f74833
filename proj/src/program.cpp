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

#include "vectx/program.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <map>
#include <set>
#include <utility>

#include "parsing.hpp"
#include "vectx/error.hpp"
#include "vectx/runtime.hpp"

namespace vectx {

Stage Stage::map(std::string name, FnRef f) {
  Stage s;
  s.kind = Kind::kMap;
  s.name = std::move(name);
  s.fn = std::move(f);
  return s;
}

Stage Stage::fold(std::string name, FnRef f, Value acc) {
  Stage s;
  s.kind = Kind::kFold;
  s.name = std::move(name);
  s.fn = std::move(f);
  s.acc = std::move(acc);
  return s;
}

Stage Stage::zipt(std::string name) {
  Stage s;
  s.kind = Kind::kZipt;
  s.name = std::move(name);
  return s;
}

Stage Stage::unzipt(std::string name) {
  Stage s;
  s.kind = Kind::kUnzipt;
  s.name = std::move(name);
  return s;
}

Stage Stage::reshape_to(std::string name, std::size_t k) {
  Stage s;
  s.kind = Kind::kReshapeTo;
  s.name = std::move(name);
  s.width = k;
  return s;
}

Stage Stage::reshape_from(std::string name, std::size_t k) {
  Stage s;
  s.kind = Kind::kReshapeFrom;
  s.name = std::move(name);
  s.width = k;
  return s;
}

Stage Stage::composed(std::string name, std::vector<Stage> parts) {
  Stage s;
  s.kind = Kind::kComposed;
  s.name = std::move(name);
  s.parts = std::move(parts);
  return s;
}

const Stage &Program::stage(std::string_view name) const {
  auto it = std::find_if(stages.begin(), stages.end(),
                         [&](const Stage &s) { return s.name == name; });
  if (it == stages.end()) throw TypeError(fmt::format("unknown stage '{}'", name));
  return *it;
}

const OpaqueFn *Program::function(std::string_view name) const {
  for (const FnRef &f : functions) {
    if (f->name == name) return f.get();
  }
  return nullptr;
}

std::vector<Stage> Program::pipeline_stages() const {
  std::vector<Stage> out;
  out.reserve(pipeline.size());
  for (const std::string &name : pipeline) out.push_back(stage(name));
  return out;
}

std::string print_signature(const FnSignature &sig) {
  std::string out;
  for (const VecType &p : sig.params) out += print_type(p) + " -> ";
  return out + print_type(sig.result);
}

// --- Typing ---

void check_function(const OpaqueFn &f) {
  const FnSignature &sig = f.signature;
  auto fail = [&](const std::string &why) {
    throw TypeError(fmt::format("function '{}' :: {}: {}", f.name, print_signature(sig), why));
  };
  if (sig.params.empty() || sig.params.size() > 2) fail("expected one or two arguments");
  if (sig.params.size() == 2 && !sig.is_fold()) {
    fail("two-argument functions must have the fold shape b -> t -> b");
  }
  if (f.form == FnForm::kOpaque || f.form == FnForm::kPrimitive) return;

  const OpaqueFn &h = *f.inner;
  const FnSignature &hs = h.signature;
  switch (f.form) {
    case FnForm::kElementwise: {
      if (!sig.is_unary() || !hs.is_unary()) fail("elementwise needs unary functions");
      const VecType &in = sig.params[0];
      const VecType &out = sig.result;
      if (!in.is_vec() || !out.is_vec() || in.size() != out.size() ||
          in.element() != hs.params[0] || out.element() != hs.result) {
        fail(fmt::format("elementwise {} needs [t1]<k> -> [t2]<k> for {} :: {}", h.name,
                         h.name, print_signature(hs)));
      }
      return;
    }
    case FnForm::kFoldOf: {
      if (!sig.is_fold() || !hs.is_fold()) fail("foldof needs fold-shaped functions");
      const VecType &chunk = sig.params[1];
      if (sig.result != hs.result || !chunk.is_vec() || chunk.element() != hs.params[1]) {
        fail(fmt::format("foldof {} needs b -> [t]<k> -> b for {} :: {}", h.name, h.name,
                         print_signature(hs)));
      }
      return;
    }
    case FnForm::kNarrow: {
      if (!sig.is_unary() || !hs.is_unary()) fail("narrow needs unary functions");
      const VecType &in = hs.params[0];
      const VecType &out = hs.result;
      if (!in.is_vec() || !out.is_vec() || in.size() != f.width || out.size() != f.width ||
          in.element() != sig.params[0] || out.element() != sig.result) {
        fail(fmt::format("narrow {} {} needs {} :: [t1]<{}> -> [t2]<{}>", f.width, h.name,
                         h.name, f.width, f.width));
      }
      return;
    }
    case FnForm::kNarrowFold: {
      if (!sig.is_fold() || !hs.is_fold()) fail("narrowfold needs fold-shaped functions");
      const VecType &chunk = hs.params[1];
      if (sig.result != hs.result || !chunk.is_vec() || chunk.size() != f.width ||
          chunk.element() != sig.params[1]) {
        fail(fmt::format("narrowfold {} {} needs {} :: b -> [t]<{}> -> b", f.width, h.name,
                         h.name, f.width));
      }
      return;
    }
    default:
      return;
  }
}

VecType stage_output(const Stage &stage, const VecType &input) {
  auto fail = [&](const std::string &why) {
    throw TypeError(fmt::format("stage '{}': {}", stage.name, why));
  };
  switch (stage.kind) {
    case Stage::Kind::kMap: {
      const FnSignature &sig = stage.fn->signature;
      if (!input.is_vec()) fail(fmt::format("map needs a vector input, got {}", print_type(input)));
      if (!sig.is_unary() || sig.params[0] != input.element()) {
        fail(fmt::format("map {} :: {} cannot take elements of type {}", stage.fn->name,
                         print_signature(sig), print_type(input.element())));
      }
      return VecType::vec(input.size(), sig.result);
    }
    case Stage::Kind::kFold: {
      const FnSignature &sig = stage.fn->signature;
      if (!input.is_vec()) {
        fail(fmt::format("foldl needs a vector input, got {}", print_type(input)));
      }
      if (!sig.is_fold() || sig.params[1] != input.element()) {
        fail(fmt::format("foldl {} :: {} cannot take elements of type {}", stage.fn->name,
                         print_signature(sig), print_type(input.element())));
      }
      if (!matches(stage.acc, sig.result)) {
        fail(fmt::format("accumulator {} does not have type {}", print_value(stage.acc),
                         print_type(sig.result)));
      }
      return sig.result;
    }
    case Stage::Kind::kZip:
    case Stage::Kind::kZipt: {
      if (!input.is_tuple() || !input.first().is_vec() || !input.second().is_vec() ||
          input.first().size() != input.second().size()) {
        fail(fmt::format("zipt needs a pair of equal-length vectors, got {}", print_type(input)));
      }
      return VecType::vec(input.first().size(),
                          VecType::tuple(input.first().element(), input.second().element()));
    }
    case Stage::Kind::kUnzip:
    case Stage::Kind::kUnzipt: {
      if (!input.is_vec() || !input.element().is_tuple()) {
        fail(fmt::format("unzipt needs a vector of pairs, got {}", print_type(input)));
      }
      const std::size_t n = input.size();
      return VecType::tuple(VecType::vec(n, input.element().first()),
                            VecType::vec(n, input.element().second()));
    }
    case Stage::Kind::kReshapeTo:
    case Stage::Kind::kReshapeFrom: {
      if (input.is_tuple()) {
        return VecType::tuple(stage_output(stage, input.first()),
                              stage_output(stage, input.second()));
      }
      const std::size_t k = stage.width;
      if (stage.kind == Stage::Kind::kReshapeTo) {
        if (!input.is_vec() || input.size() % k != 0) {
          fail(fmt::format("reshapeTo {} needs a vector whose size is a multiple of {}, got {}",
                           k, k, print_type(input)));
        }
        return VecType::vec(input.size() / k, VecType::vec(k, input.element()));
      }
      if (!input.is_vec() || !input.element().is_vec() || input.element().size() != k) {
        fail(fmt::format("reshapeFrom {} needs a vector of {}-vectors, got {}", k, k,
                         print_type(input)));
      }
      return VecType::vec(input.size() * k, input.element().element());
    }
    case Stage::Kind::kComposed: {
      VecType cur = input;
      for (const Stage &part : stage.parts) cur = stage_output(part, cur);
      return cur;
    }
  }
  return input;
}

TypedProgram typecheck(const Program &p) {
  for (const FnRef &f : p.functions) check_function(*f);
  TypedProgram typed{p, {}, p.input.type};
  VecType cur = p.input.type;
  for (const std::string &name : p.pipeline) {
    const Stage &s = p.stage(name);
    VecType out = stage_output(s, cur);
    typed.stages.push_back({name, cur, out});
    cur = out;
  }
  typed.result = cur;
  return typed;
}

namespace {

std::size_t fn_levels(const OpaqueFn &f) {
  switch (f.form) {
    case FnForm::kElementwise:
    case FnForm::kFoldOf:
      return 1 + fn_levels(*f.inner);
    case FnForm::kNarrow:
    case FnForm::kNarrowFold:
      return fn_levels(*f.inner);
    default:
      return 0;
  }
}

}  // namespace

std::size_t map_fold_levels(const Stage &stage) {
  switch (stage.kind) {
    case Stage::Kind::kMap:
    case Stage::Kind::kFold:
      return 1 + fn_levels(*stage.fn);
    case Stage::Kind::kComposed: {
      std::size_t n = 0;
      for (const Stage &part : stage.parts) n += map_fold_levels(part);
      return n;
    }
    default:
      return 0;
  }
}

// --- Text form ---

namespace {

struct FnDecl {
  std::size_t line = 0;
  std::size_t column = 0;
  FnSignature signature;
};

struct FnBody {
  std::size_t line = 0;
  std::size_t column = 0;
  FnForm form = FnForm::kOpaque;
  std::string primitive;
  std::string inner;
  std::size_t inner_column = 0;
  std::size_t width = 0;
};

struct StageDecl {
  std::size_t line = 0;
  std::string name;
  std::string text;          // right-hand side
  std::size_t text_column = 0;
};

class ProgramParser {
 public:
  Program parse(std::string_view text) {
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      ++line_no;
      parse_line(text.substr(start, end - start), line_no);
      start = end + 1;
    }
    if (!have_input_) throw ParseError("missing 'input' line", line_no, 1);
    if (!have_result_) throw ParseError("missing 'result' line", line_no, 1);

    for (const std::string &name : fn_order_) build_fn(name, 0, 0);
    for (const auto &[name, body] : bodies_) {
      if (!decls_.count(name)) {
        throw ParseError(fmt::format("function '{}' has a definition but no signature", name),
                         body.line, body.column);
      }
    }
    for (const std::string &name : fn_order_) program_.functions.push_back(built_.at(name));
    for (const StageDecl &decl : stage_decls_) program_.stages.push_back(build_stage(decl));
    resolve_result();
    return std::move(program_);
  }

 private:
  void parse_line(std::string_view line, std::size_t line_no) {
    detail::Cursor cur(line, line_no);
    if (cur.at_end() || cur.peek() == '#') return;
    const std::size_t key_at = cur.pos();
    const std::string key = cur.identifier();
    if (key == "input") {
      if (have_input_) cur.fail_at(key_at, "duplicate 'input' line");
      program_.input.name = cur.word();
      if (!cur.consume(std::string_view("::"))) cur.fail("expected '::'");
      program_.input.type = detail::parse_type_at(cur);
      have_input_ = true;
    } else if (key == "fn") {
      parse_fn(cur, line_no);
    } else if (key == "stage") {
      StageDecl decl;
      decl.line = line_no;
      const std::size_t name_at = cur.pos();
      decl.name = cur.word();
      for (const StageDecl &other : stage_decls_) {
        if (other.name == decl.name) {
          cur.fail_at(name_at, fmt::format("duplicate stage '{}'", decl.name));
        }
      }
      cur.expect('=');
      cur.skip_space();
      decl.text_column = cur.pos() + 1;
      decl.text = std::string(cur.rest());
      stage_decls_.push_back(std::move(decl));
      return;
    } else if (key == "result") {
      if (have_result_) cur.fail_at(key_at, "duplicate 'result' line");
      program_.result_name = cur.word();
      cur.expect('=');
      cur.skip_space();
      result_line_ = line_no;
      result_column_ = cur.pos() + 1;
      result_text_ = std::string(cur.rest());
      have_result_ = true;
      return;
    } else {
      cur.fail_at(key_at, fmt::format("unknown declaration '{}'", key));
    }
    if (!cur.at_end()) cur.fail("unexpected trailing input");
  }

  void parse_fn(detail::Cursor &cur, std::size_t line_no) {
    const std::size_t name_at = cur.pos();
    cur.skip_space();
    const std::size_t column = cur.pos() + 1;
    std::string name = cur.word();
    if (cur.consume(std::string_view("::"))) {
      if (decls_.count(name)) {
        cur.fail_at(name_at, fmt::format("duplicate signature for '{}'", name));
      }
      FnDecl decl{line_no, column, {}};
      std::vector<VecType> types{detail::parse_type_at(cur)};
      while (cur.consume(std::string_view("->"))) types.push_back(detail::parse_type_at(cur));
      if (types.size() < 2) cur.fail("a signature needs at least one argument and a result");
      decl.signature.result = types.back();
      types.pop_back();
      decl.signature.params = std::move(types);
      decls_.emplace(name, std::move(decl));
      fn_order_.push_back(std::move(name));
      return;
    }
    cur.expect('=');
    if (bodies_.count(name)) cur.fail_at(name_at, fmt::format("duplicate definition of '{}'", name));
    FnBody body;
    body.line = line_no;
    body.column = column;
    const std::size_t form_at = cur.pos();
    const std::string form = cur.identifier();
    if (form == "prim") {
      body.form = FnForm::kPrimitive;
      const std::size_t prim_at = cur.pos();
      body.primitive = cur.identifier();
      if (!known_primitive(body.primitive)) {
        cur.fail_at(prim_at, fmt::format("unknown primitive '{}'", body.primitive));
      }
    } else if (form == "elementwise" || form == "foldof") {
      body.form = form == "elementwise" ? FnForm::kElementwise : FnForm::kFoldOf;
      cur.skip_space();
      body.inner_column = cur.pos() + 1;
      body.inner = cur.word();
    } else if (form == "narrow" || form == "narrowfold") {
      body.form = form == "narrow" ? FnForm::kNarrow : FnForm::kNarrowFold;
      body.width = cur.positive_int();
      cur.skip_space();
      body.inner_column = cur.pos() + 1;
      body.inner = cur.word();
    } else {
      cur.fail_at(form_at, fmt::format("unknown function form '{}'", form));
    }
    bodies_.emplace(std::move(name), std::move(body));
  }

  FnRef build_fn(const std::string &name, std::size_t ref_line, std::size_t ref_column) {
    if (auto it = built_.find(name); it != built_.end()) return it->second;
    auto decl = decls_.find(name);
    if (decl == decls_.end()) {
      throw ParseError(fmt::format("undeclared function '{}'", name), ref_line, ref_column);
    }
    if (!in_progress_.insert(name).second) {
      throw ParseError(fmt::format("function '{}' is defined in terms of itself", name),
                       ref_line, ref_column);
    }
    auto fn = std::make_shared<OpaqueFn>();
    fn->name = name;
    fn->signature = decl->second.signature;
    if (auto body = bodies_.find(name); body != bodies_.end()) {
      fn->form = body->second.form;
      fn->primitive = body->second.primitive;
      fn->width = body->second.width;
      if (!body->second.inner.empty()) {
        fn->inner = build_fn(body->second.inner, body->second.line, body->second.inner_column);
      }
    }
    in_progress_.erase(name);
    built_.emplace(name, fn);
    return fn;
  }

  FnRef lookup_fn(const std::string &name, std::size_t line, std::size_t column) {
    auto it = built_.find(name);
    if (it == built_.end()) {
      throw ParseError(fmt::format("undeclared function '{}'", name), line, column);
    }
    return it->second;
  }

  const Stage *find_stage(std::string_view name) const {
    for (const Stage &s : program_.stages) {
      if (s.name == name) return &s;
    }
    return nullptr;
  }

  Stage build_stage(const StageDecl &decl) {
    detail::Cursor cur(decl.text, decl.line, decl.text_column);
    const std::size_t op_at = cur.pos();
    const std::string op = cur.word();
    Stage stage;
    if (op == "map" || op == "foldl") {
      cur.skip_space();
      const std::size_t fn_at = cur.pos();
      const std::string fn_name = cur.word();
      FnRef fn = lookup_fn(fn_name, decl.line, decl.text_column + fn_at);
      if (op == "map") {
        stage = Stage::map(decl.name, std::move(fn));
      } else {
        Value acc = detail::parse_value_at(cur);
        stage = Stage::fold(decl.name, std::move(fn), std::move(acc));
      }
    } else if (op == "zipt" || op == "zip") {
      stage = Stage::zipt(decl.name);
      if (op == "zip") stage.kind = Stage::Kind::kZip;
    } else if (op == "unzipt" || op == "unzip") {
      stage = Stage::unzipt(decl.name);
      if (op == "unzip") stage.kind = Stage::Kind::kUnzip;
    } else if (op == "reshapeTo") {
      stage = Stage::reshape_to(decl.name, cur.positive_int());
    } else if (op == "reshapeFrom") {
      stage = Stage::reshape_from(decl.name, cur.positive_int());
    } else {
      // Composition of previously declared stages: `g |> h`.
      std::vector<Stage> parts;
      std::string part = op;
      std::size_t part_at = op_at;
      while (true) {
        const Stage *s = find_stage(part);
        if (s == nullptr) {
          cur.fail_at(part_at, fmt::format("unknown stage or stage form '{}'", part));
        }
        parts.push_back(*s);
        if (!cur.consume(std::string_view("|>"))) break;
        cur.skip_space();
        part_at = cur.pos();
        part = cur.word();
      }
      stage = Stage::composed(decl.name, std::move(parts));
    }
    if (!cur.at_end()) cur.fail("unexpected trailing input");
    return stage;
  }

  void resolve_result() {
    detail::Cursor cur(result_text_, result_line_, result_column_);
    std::vector<std::pair<std::string, std::size_t>> names;
    cur.skip_space();
    names.emplace_back(cur.word(), cur.pos());
    while (cur.consume(std::string_view("|>"))) {
      cur.skip_space();
      const std::size_t at = cur.pos();
      names.emplace_back(cur.word(), at);
    }
    // The last name is the input: `g |> h s`.
    if (!cur.at_end()) {
      cur.skip_space();
      const std::size_t at = cur.pos();
      names.emplace_back(cur.word(), at);
    }
    if (!cur.at_end()) cur.fail("unexpected trailing input");
    const auto &[input, input_at] = names.back();
    if (input != program_.input.name) {
      cur.fail_at(input_at, fmt::format("result must be computed from input '{}', not '{}'",
                                        program_.input.name, input));
    }
    names.pop_back();
    for (const auto &[name, at] : names) {
      if (find_stage(name) == nullptr) {
        cur.fail_at(at, fmt::format("unknown stage '{}'", name));
      }
      program_.pipeline.push_back(name);
    }
  }

  Program program_;
  bool have_input_ = false;
  bool have_result_ = false;
  std::map<std::string, FnDecl> decls_;
  std::vector<std::string> fn_order_;
  std::map<std::string, FnBody> bodies_;
  std::map<std::string, FnRef> built_;
  std::set<std::string> in_progress_;
  std::vector<StageDecl> stage_decls_;
  std::string result_text_;
  std::size_t result_line_ = 0;
  std::size_t result_column_ = 0;
};

std::string print_stage_rhs(const Stage &s) {
  switch (s.kind) {
    case Stage::Kind::kMap: return "map " + s.fn->name;
    case Stage::Kind::kFold: return fmt::format("foldl {} {}", s.fn->name, print_value(s.acc));
    case Stage::Kind::kZip: return "zip";
    case Stage::Kind::kUnzip: return "unzip";
    case Stage::Kind::kZipt: return "zipt";
    case Stage::Kind::kUnzipt: return "unzipt";
    case Stage::Kind::kReshapeTo: return fmt::format("reshapeTo {}", s.width);
    case Stage::Kind::kReshapeFrom: return fmt::format("reshapeFrom {}", s.width);
    case Stage::Kind::kComposed: {
      std::string out;
      for (const Stage &part : s.parts) {
        if (!out.empty()) out += " |> ";
        out += part.name;
      }
      return out;
    }
  }
  return {};
}

}  // namespace

Program parse_program(std::string_view text) {
  Program p = ProgramParser().parse(text);
  for (const FnRef &f : p.functions) check_function(*f);
  return p;
}

std::string print_program(const Program &p) {
  std::string out = fmt::format("input {} :: {}\n", p.input.name, print_type(p.input.type));
  for (const FnRef &f : p.functions) {
    out += fmt::format("fn {} :: {}\n", f->name, print_signature(f->signature));
    switch (f->form) {
      case FnForm::kOpaque: break;
      case FnForm::kPrimitive: out += fmt::format("fn {} = prim {}\n", f->name, f->primitive); break;
      case FnForm::kElementwise:
        out += fmt::format("fn {} = elementwise {}\n", f->name, f->inner->name);
        break;
      case FnForm::kFoldOf:
        out += fmt::format("fn {} = foldof {}\n", f->name, f->inner->name);
        break;
      case FnForm::kNarrow:
        out += fmt::format("fn {} = narrow {} {}\n", f->name, f->width, f->inner->name);
        break;
      case FnForm::kNarrowFold:
        out += fmt::format("fn {} = narrowfold {} {}\n", f->name, f->width, f->inner->name);
        break;
    }
  }
  for (const Stage &s : p.stages) out += fmt::format("stage {} = {}\n", s.name, print_stage_rhs(s));
  out += fmt::format("result {} = ", p.result_name);
  for (std::size_t i = 0; i < p.pipeline.size(); ++i) {
    out += p.pipeline[i] + (i + 1 == p.pipeline.size() ? " " : " |> ");
  }
  out += p.input.name + "\n";
  return out;
}

}  // namespace vectx
