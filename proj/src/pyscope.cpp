// Copyright 2026 The Tracemark Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tracemark/pyscope.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace tracemark::py {

namespace {

enum BindBits : uint8_t {
  kBindParam = 1,
  kBindAssign = 2,
  kBindFunc = 4,
  kBindClass = 8,
  kBindImport = 16,
  kBindExcept = 32,
};

enum class Role : uint8_t {
  kUse,       // resolves to a variable (read, write, del, decl)
  kAttr,      // attribute name after '.'
  kKwarg,     // keyword-argument name at a call site
  kModule,    // module path component in an import statement
  kBindOnly,  // def/class/import-as name: binds, but is not a variable use
};

struct Scope {
  enum Type { kModule, kClass, kFunction, kLambda, kComp } type;
  int parent = -1;
  bool disq = false;
  std::map<std::string, uint8_t> binds;
  std::unordered_set<std::string> global_decl;
  std::unordered_set<std::string> nonlocal_decl;
};

// Identifiers whose presence makes renaming in the enclosing scopes unsafe:
// they can observe or regenerate local names at runtime.
bool is_dynamic_name(std::string_view s) {
  return s == "eval" || s == "exec" || s == "compile" || s == "locals" ||
         s == "globals" || s == "vars" || s == "dir";
}

struct Stmt {
  size_t first;  // token index
  size_t last;   // exclusive, before the logical newline
  int indent;
};

class Analyzer {
 public:
  Analyzer(std::string_view src, const std::vector<Lexeme>& toks)
      : src_(src), toks_(toks) {
    owner_.assign(toks.size(), 0);
    role_.assign(toks.size(), Role::kUse);
    scopes_.push_back(Scope{Scope::kModule, -1});
  }

  ScopeAnalysis run();

 private:
  std::string_view text(size_t i) const {
    return src_.substr(toks_[i].begin, toks_[i].end - toks_[i].begin);
  }
  bool is_op(size_t i, std::string_view op) const {
    return toks_[i].kind == LexKind::kOp && text(i) == op;
  }
  bool is_kw(size_t i, std::string_view kw) const {
    return toks_[i].kind == LexKind::kKeyword && text(i) == kw;
  }
  bool open_bracket(size_t i) const {
    return is_op(i, "(") || is_op(i, "[") || is_op(i, "{");
  }
  bool close_bracket(size_t i) const {
    return is_op(i, ")") || is_op(i, "]") || is_op(i, "}");
  }

  int new_scope(Scope::Type type, int parent) {
    scopes_.push_back(Scope{type, parent});
    return static_cast<int>(scopes_.size()) - 1;
  }
  void bind(int scope, std::string_view name, uint8_t bits) {
    scopes_[scope].binds[std::string(name)] |= bits;
  }
  void disqualify_chain(int scope) { disq_roots_.push_back(scope); }

  std::vector<Stmt> split_statements();
  int indent_of(size_t tok) const;

  void process_block(const std::vector<Stmt>& stmts, size_t lo, size_t hi,
                     int scope);
  void process_simple(size_t b, size_t e, int scope);
  void handle_def(const std::vector<Stmt>& stmts, size_t idx, size_t child_lo,
                  size_t child_hi, int scope);
  void handle_class(const std::vector<Stmt>& stmts, size_t idx,
                    size_t child_lo, size_t child_hi, int scope);
  void handle_import(size_t b, size_t e, int scope);
  void bind_targets_in(size_t b, size_t e, int scope);
  // Returns the index just past the parsed parameter list.
  size_t parse_params(size_t open_paren, size_t e, int fscope, int outer);

  void expr_walk(size_t b, size_t e, int scope);
  size_t matching_close(size_t open, size_t e) const;
  bool bracket_is_comprehension(size_t open, size_t e) const;

  void resolve_occurrences();

  std::string_view src_;
  const std::vector<Lexeme>& toks_;
  std::vector<Scope> scopes_;
  std::vector<int> owner_;
  std::vector<Role> role_;
  std::vector<int> disq_roots_;
  ScopeAnalysis out_;
};

int Analyzer::indent_of(size_t tok) const {
  size_t start = toks_[tok].begin;
  size_t line_start = start;
  while (line_start > 0 && src_[line_start - 1] != '\n') --line_start;
  return static_cast<int>(start - line_start);
}

std::vector<Stmt> Analyzer::split_statements() {
  std::vector<Stmt> stmts;
  size_t i = 0;
  while (i < toks_.size()) {
    if (toks_[i].kind == LexKind::kNewline) {
      ++i;
      continue;
    }
    size_t b = i;
    while (i < toks_.size() && toks_[i].kind != LexKind::kNewline) ++i;
    stmts.push_back(Stmt{b, i, indent_of(b)});
  }
  return stmts;
}

size_t Analyzer::matching_close(size_t open, size_t e) const {
  int depth = 0;
  for (size_t i = open; i < e; ++i) {
    if (open_bracket(i)) ++depth;
    if (close_bracket(i)) {
      --depth;
      if (depth == 0) return i;
    }
  }
  return e;
}

bool Analyzer::bracket_is_comprehension(size_t open, size_t e) const {
  int depth = 0;
  for (size_t i = open; i < e; ++i) {
    if (open_bracket(i)) ++depth;
    if (close_bracket(i)) {
      --depth;
      if (depth == 0) return false;
    }
    if (depth == 1 && i > open && is_kw(i, "for")) return true;
  }
  return false;
}

// One left-to-right pass over an expression region: assigns token owners,
// classifies attribute/keyword-argument names, opens lambda and
// comprehension scopes, records walrus bindings, and flags scope chains
// that contain dynamic-name constructs or interpolated f-strings.
void Analyzer::expr_walk(size_t b, size_t e, int scope) {
  struct Entry {
    int scope;
    int depth;
    enum Kind { kLambdaBody, kCompBody, kFirstIterable } kind;
    bool first_for_seen = false;
  };
  std::vector<Entry> stack;
  // bracket kinds with call flag and the comp scope they opened (if any)
  struct Br {
    char ch;
    bool call;
    int comp = -1;
  };
  std::vector<Br> brackets;

  auto cur_scope = [&]() {
    return stack.empty() ? scope : stack.back().scope;
  };

  size_t i = b;
  int prev = -1;  // previous significant token index
  while (i < e) {
    int depth = static_cast<int>(brackets.size());

    if (open_bracket(i)) {
      bool call = prev >= 0 && (toks_[prev].kind == LexKind::kIdent ||
                                toks_[prev].kind == LexKind::kString ||
                                is_op(static_cast<size_t>(prev), ")") ||
                                is_op(static_cast<size_t>(prev), "]"));
      owner_[i] = cur_scope();
      Br br{text(i)[0], call && text(i)[0] == '(', -1};
      if (bracket_is_comprehension(i, e)) {
        br.comp = new_scope(Scope::kComp, cur_scope());
        stack.push_back(Entry{br.comp, depth + 1, Entry::kCompBody, false});
      }
      brackets.push_back(br);
      prev = static_cast<int>(i);
      ++i;
      continue;
    }

    if (close_bracket(i)) {
      while (!stack.empty() && stack.back().depth >= depth) stack.pop_back();
      if (!brackets.empty()) brackets.pop_back();
      owner_[i] = cur_scope();
      prev = static_cast<int>(i);
      ++i;
      continue;
    }

    if (is_kw(i, "lambda")) {
      int lam = new_scope(Scope::kLambda, cur_scope());
      owner_[i] = lam;
      int d0 = depth;
      size_t j = i + 1;
      int expecting = 1;  // next bare ident at d0 is a parameter
      while (j < e) {
        int jd = static_cast<int>(brackets.size());
        if (is_op(j, ":") && jd == d0) break;
        if (open_bracket(j)) {
          brackets.push_back(Br{text(j)[0], false, -1});
          owner_[j] = lam;
          ++j;
          continue;
        }
        if (close_bracket(j)) {
          if (!brackets.empty()) brackets.pop_back();
          owner_[j] = lam;
          ++j;
          continue;
        }
        if (toks_[j].kind == LexKind::kIdent && jd == d0 && expecting) {
          bind(lam, text(j), kBindParam);
          owner_[j] = lam;
          expecting = 0;
          ++j;
          continue;
        }
        if (is_op(j, ",") && jd == d0) {
          expecting = 1;
          owner_[j] = lam;
          ++j;
          continue;
        }
        if (is_op(j, "=") && jd == d0) {
          // default value: evaluated in the enclosing scope
          owner_[j] = lam;
          size_t k = j + 1;
          int kd = 0;
          while (k < e) {
            if (open_bracket(k)) ++kd;
            if (close_bracket(k)) --kd;
            if (kd == 0 && (is_op(k, ",") || is_op(k, ":"))) break;
            ++k;
          }
          expr_walk(j + 1, k, cur_scope() == lam ? scopes_[lam].parent
                                                 : cur_scope());
          j = k;
          continue;
        }
        owner_[j] = lam;
        ++j;
      }
      if (j < e) {
        owner_[j] = lam;  // the ':' token
        stack.push_back(Entry{lam, d0, Entry::kLambdaBody, false});
        i = j + 1;
        prev = static_cast<int>(j);
        continue;
      }
      i = j;
      continue;
    }

    if (is_op(i, ",")) {
      while (!stack.empty() && stack.back().kind == Entry::kLambdaBody &&
             stack.back().depth == depth) {
        stack.pop_back();
      }
      owner_[i] = cur_scope();
      prev = static_cast<int>(i);
      ++i;
      continue;
    }

    if (is_kw(i, "for") && !stack.empty() &&
        stack.back().kind == Entry::kFirstIterable &&
        stack.back().depth == depth) {
      stack.pop_back();
    }
    if (is_kw(i, "for") && !stack.empty() &&
        stack.back().kind == Entry::kLambdaBody &&
        stack.back().depth == depth) {
      // generator expression around a lambda: the lambda body ends here
      while (!stack.empty() && stack.back().kind == Entry::kLambdaBody &&
             stack.back().depth == depth) {
        stack.pop_back();
      }
    }

    if (is_kw(i, "for") && !stack.empty() &&
        stack.back().kind == Entry::kCompBody &&
        stack.back().depth == depth) {
      Entry& comp = stack.back();
      int comp_scope = comp.scope;
      bool first = !comp.first_for_seen;
      comp.first_for_seen = true;
      owner_[i] = comp_scope;
      // targets up to 'in' bind in the comprehension scope
      size_t j = i + 1;
      int jd = 0;
      while (j < e && !(jd == 0 && is_kw(j, "in"))) {
        if (open_bracket(j)) ++jd;
        if (close_bracket(j)) --jd;
        owner_[j] = comp_scope;
        if (toks_[j].kind == LexKind::kIdent && jd == 0) {
          bool simple = true;
          if (j + 1 < e && (is_op(j + 1, "(") || is_op(j + 1, "[") ||
                            is_op(j + 1, "."))) {
            simple = false;
          }
          if (j > 0 && is_op(j - 1, ".")) simple = false;
          if (simple) bind(comp_scope, text(j), kBindAssign);
        }
        ++j;
      }
      if (j < e) owner_[j] = comp_scope;  // 'in'
      if (first && j < e) {
        // the first iterable is evaluated in the enclosing scope
        stack.push_back(Entry{scopes_[comp_scope].parent, depth,
                              Entry::kFirstIterable, false});
      }
      prev = static_cast<int>(j);
      i = j + 1;
      continue;
    }

    if ((is_kw(i, "if") || is_kw(i, "async")) && !stack.empty() &&
        stack.back().kind == Entry::kFirstIterable &&
        stack.back().depth == depth) {
      stack.pop_back();
    }

    owner_[i] = cur_scope();

    if (toks_[i].kind == LexKind::kIdent) {
      std::string_view name = text(i);
      if (prev >= 0 && is_op(static_cast<size_t>(prev), ".")) {
        role_[i] = Role::kAttr;
      } else if (i + 1 < e && is_op(i + 1, "=") && !brackets.empty() &&
                 brackets.back().call &&
                 (prev >= 0 && (is_op(static_cast<size_t>(prev), "(") ||
                                is_op(static_cast<size_t>(prev), ",")))) {
        role_[i] = Role::kKwarg;
      } else {
        role_[i] = Role::kUse;
        if (is_dynamic_name(name)) disqualify_chain(owner_[i]);
        if (i + 1 < e && is_op(i + 1, ":=")) {
          int target = owner_[i];
          if (scopes_[target].type == Scope::kComp) {
            // assignment expressions inside comprehensions bind outside;
            // too subtle to rename safely, rule the region out
            disqualify_chain(scopes_[target].parent);
          } else {
            bind(target, name, kBindAssign);
          }
        }
      }
    } else if (toks_[i].kind == LexKind::kString) {
      if ((toks_[i].flags & kFlagFString) && (toks_[i].flags & kFlagHasBraces)) {
        disqualify_chain(owner_[i]);
      }
    }

    prev = static_cast<int>(i);
    ++i;
  }
}

size_t Analyzer::parse_params(size_t open, size_t e, int fscope, int outer) {
  size_t close = matching_close(open, e);
  owner_[open] = fscope;
  int expecting = 1;
  size_t i = open + 1;
  int depth = 0;  // relative to inside the parens
  while (i < close) {
    if (open_bracket(i)) ++depth;
    if (close_bracket(i)) --depth;
    if (depth == 0 && toks_[i].kind == LexKind::kIdent && expecting) {
      bind(fscope, text(i), kBindParam);
      owner_[i] = fscope;
      role_[i] = Role::kUse;
      expecting = 0;
      ++i;
      continue;
    }
    if (depth == 0 && is_op(i, ",")) {
      expecting = 1;
      owner_[i] = fscope;
      ++i;
      continue;
    }
    if (depth == 0 && (is_op(i, "*") || is_op(i, "**") || is_op(i, "/"))) {
      owner_[i] = fscope;
      ++i;
      continue;
    }
    if (depth == 0 && (is_op(i, ":") || is_op(i, "="))) {
      // annotation or default: evaluated in the enclosing scope
      owner_[i] = fscope;
      size_t k = i + 1;
      int kd = 0;
      while (k < close) {
        if (open_bracket(k)) ++kd;
        if (close_bracket(k)) --kd;
        if (kd == 0 && (is_op(k, ",") || (is_op(i, ":") && is_op(k, "="))))
          break;
        ++k;
      }
      expr_walk(i + 1, k, outer);
      i = k;
      continue;
    }
    owner_[i] = fscope;
    ++i;
  }
  if (close < e) owner_[close] = fscope;
  return close + 1;
}

void Analyzer::handle_def(const std::vector<Stmt>& stmts, size_t idx,
                          size_t child_lo, size_t child_hi, int scope) {
  const Stmt& st = stmts[idx];
  size_t i = st.first;
  if (is_kw(i, "async")) {
    owner_[i] = scope;
    ++i;
  }
  owner_[i] = scope;  // 'def'
  ++i;
  if (i >= st.last || toks_[i].kind != LexKind::kIdent) return;
  bind(scope, text(i), kBindFunc);
  owner_[i] = scope;
  role_[i] = Role::kBindOnly;
  ++i;

  int fscope = new_scope(Scope::kFunction, scope);
  if (i < st.last && is_op(i, "(")) {
    i = parse_params(i, st.last, fscope, scope);
  }
  // return annotation: evaluated in the enclosing scope
  if (i < st.last && is_op(i, "->")) {
    owner_[i] = scope;
    size_t k = i + 1;
    int kd = 0;
    while (k < st.last && !(kd == 0 && is_op(k, ":"))) {
      if (open_bracket(k)) ++kd;
      if (close_bracket(k)) --kd;
      ++k;
    }
    expr_walk(i + 1, k, scope);
    i = k;
  }
  if (i < st.last && is_op(i, ":")) {
    owner_[i] = fscope;
    ++i;
  }
  if (i < st.last) {
    process_simple(i, st.last, fscope);  // inline suite
  }
  process_block(stmts, child_lo, child_hi, fscope);
}

void Analyzer::handle_class(const std::vector<Stmt>& stmts, size_t idx,
                            size_t child_lo, size_t child_hi, int scope) {
  const Stmt& st = stmts[idx];
  size_t i = st.first;
  owner_[i] = scope;  // 'class'
  ++i;
  if (i >= st.last || toks_[i].kind != LexKind::kIdent) return;
  bind(scope, text(i), kBindClass);
  owner_[i] = scope;
  role_[i] = Role::kBindOnly;
  ++i;

  int cscope = new_scope(Scope::kClass, scope);
  if (i < st.last && is_op(i, "(")) {
    size_t close = matching_close(i, st.last);
    expr_walk(i, close + 1, scope);  // base classes, enclosing scope
    i = close + 1;
  }
  if (i < st.last && is_op(i, ":")) {
    owner_[i] = cscope;
    ++i;
  }
  if (i < st.last) process_simple(i, st.last, cscope);
  process_block(stmts, child_lo, child_hi, cscope);
}

void Analyzer::handle_import(size_t b, size_t e, int scope) {
  bool from_form = is_kw(b, "from");
  size_t i = b;
  owner_[i] = scope;
  ++i;
  bool in_names = !from_form;  // import x...: names immediately
  bool after_as = false;
  std::string_view pending;  // first dotted component or plain name
  bool pending_valid = false;

  auto flush_pending = [&]() {
    if (pending_valid) bind(scope, pending, kBindImport);
    pending_valid = false;
  };

  while (i < e) {
    owner_[i] = scope;
    if (is_kw(i, "import")) {
      in_names = true;
      after_as = false;
      ++i;
      continue;
    }
    if (is_kw(i, "as")) {
      after_as = true;
      pending_valid = false;  // the 'as' name replaces the plain binding
      ++i;
      continue;
    }
    if (is_op(i, ",")) {
      flush_pending();
      after_as = false;
      ++i;
      continue;
    }
    if (is_op(i, "*")) {
      disqualify_chain(scope);  // star import: unusable identifier universe
      ++i;
      continue;
    }
    if (toks_[i].kind == LexKind::kIdent) {
      if (after_as) {
        bind(scope, text(i), kBindImport);
        role_[i] = Role::kBindOnly;
        after_as = false;
      } else if (in_names) {
        role_[i] = Role::kModule;
        // first component of a dotted path is the bound name (import a.b)
        bool first_component = !(i > b && is_op(i - 1, "."));
        if (first_component) {
          pending = text(i);
          pending_valid = true;
        }
      } else {
        role_[i] = Role::kModule;  // between 'from' and 'import'
      }
      ++i;
      continue;
    }
    ++i;
  }
  flush_pending();
}

void Analyzer::bind_targets_in(size_t b, size_t e, int scope) {
  // Bind simple names in an assignment-target region: identifiers reachable
  // through '(' groupings only, not attribute/subscript/call heads.
  int depth = 0;
  bool paren_only = true;
  std::vector<char> kinds;
  for (size_t i = b; i < e; ++i) {
    if (open_bracket(i)) {
      kinds.push_back(text(i)[0]);
      ++depth;
      continue;
    }
    if (close_bracket(i)) {
      if (!kinds.empty()) kinds.pop_back();
      --depth;
      continue;
    }
    paren_only = std::all_of(kinds.begin(), kinds.end(),
                             [](char c) { return c == '('; });
    if (toks_[i].kind != LexKind::kIdent || !paren_only) continue;
    if (owner_[i] != scope) continue;  // inside a nested lambda/comp
    if (role_[i] != Role::kUse) continue;
    if (i > b && is_op(i - 1, ".")) continue;
    if (i + 1 < e && (is_op(i + 1, "(") || is_op(i + 1, "[") ||
                      is_op(i + 1, "."))) {
      continue;
    }
    bind(scope, text(i), kBindAssign);
  }
}

void Analyzer::process_simple(size_t b, size_t e, int scope) {
  // Split on top-level semicolons.
  int depth = 0;
  size_t start = b;
  for (size_t i = b; i <= e; ++i) {
    bool at_end = i == e;
    if (!at_end) {
      if (open_bracket(i)) ++depth;
      if (close_bracket(i)) --depth;
    }
    if (at_end || (depth == 0 && is_op(i, ";"))) {
      if (i > start) {
        size_t sb = start, se = i;
        if (!at_end) owner_[i] = scope;

        if (is_kw(sb, "import") || is_kw(sb, "from")) {
          handle_import(sb, se, scope);
        } else if (is_kw(sb, "global") || is_kw(sb, "nonlocal")) {
          bool glob = is_kw(sb, "global");
          owner_[sb] = scope;
          for (size_t j = sb + 1; j < se; ++j) {
            owner_[j] = scope;
            if (toks_[j].kind == LexKind::kIdent) {
              if (glob) {
                scopes_[scope].global_decl.insert(std::string(text(j)));
              } else {
                scopes_[scope].nonlocal_decl.insert(std::string(text(j)));
              }
            }
          }
        } else {
          expr_walk(sb, se, scope);

          // annotated assignment / declaration: NAME ':' ...
          if (toks_[sb].kind == LexKind::kIdent && sb + 1 < se &&
              is_op(sb + 1, ":") && role_[sb] == Role::kUse &&
              owner_[sb] == scope) {
            bind(scope, text(sb), kBindAssign);
          } else {
            // plain/chained/augmented assignment targets
            int d2 = 0;
            size_t seg_start = sb;
            bool seg_has_colon = false;
            size_t colon_at = 0;
            for (size_t j = sb; j < se; ++j) {
              if (open_bracket(j)) ++d2;
              if (close_bracket(j)) --d2;
              if (d2 != 0) continue;
              if (is_op(j, ":") && owner_[j] == scope) {
                seg_has_colon = true;
                colon_at = j;
              }
              bool plain_eq = is_op(j, "=");
              bool aug_eq =
                  toks_[j].kind == LexKind::kOp && text(j).size() >= 2 &&
                  text(j).back() == '=' && text(j) != "==" && text(j) != "!=" &&
                  text(j) != "<=" && text(j) != ">=" && text(j) != ":=";
              if ((plain_eq || aug_eq) && owner_[j] == scope) {
                size_t seg_end = seg_has_colon ? colon_at : j;
                bind_targets_in(seg_start, seg_end, scope);
                seg_start = j + 1;
                seg_has_colon = false;
                if (aug_eq) break;  // augmented: single target only
              }
            }
          }
        }
      }
      start = i + 1;
    }
  }
}

void Analyzer::process_block(const std::vector<Stmt>& stmts, size_t lo,
                             size_t hi, int scope) {
  size_t i = lo;
  while (i < hi) {
    const Stmt& st = stmts[i];
    // children: following statements with strictly deeper indentation
    size_t child_hi = i + 1;
    while (child_hi < hi && stmts[child_hi].indent > st.indent) ++child_hi;

    size_t f = st.first;
    bool is_async_def = is_kw(f, "async") && f + 1 < st.last &&
                        is_kw(f + 1, "def");

    if (is_kw(f, "def") || is_async_def) {
      handle_def(stmts, i, i + 1, child_hi, scope);
    } else if (is_kw(f, "class")) {
      handle_class(stmts, i, i + 1, child_hi, scope);
    } else if (is_kw(f, "if") || is_kw(f, "elif") || is_kw(f, "else") ||
               is_kw(f, "while") || is_kw(f, "try") || is_kw(f, "finally") ||
               is_kw(f, "with") || is_kw(f, "for") || is_kw(f, "except") ||
               (is_kw(f, "async") && !is_async_def)) {
      // control headers: find the suite colon at top level
      int depth = 0;
      size_t colon = st.last;
      for (size_t j = f; j < st.last; ++j) {
        if (open_bracket(j)) ++depth;
        if (close_bracket(j)) --depth;
        if (depth == 0 && is_op(j, ":")) {
          colon = j;
          break;
        }
      }
      size_t header_b = f + 1;
      if (is_kw(f, "async")) ++header_b;
      owner_[f] = scope;

      bool for_stmt = is_kw(f, "for") || (is_kw(f, "async") &&
                                          is_kw(f + 1, "for"));
      if (is_kw(f, "async")) owner_[f + 1] = scope;
      if (for_stmt && is_kw(f, "async")) header_b = f + 2;

      expr_walk(header_b, colon, scope);

      if (for_stmt) {
        // targets between 'for' and the first top-level 'in'
        int d2 = 0;
        size_t in_at = colon;
        for (size_t j = header_b; j < colon; ++j) {
          if (open_bracket(j)) ++d2;
          if (close_bracket(j)) --d2;
          if (d2 == 0 && is_kw(j, "in") && owner_[j] == scope) {
            in_at = j;
            break;
          }
        }
        bind_targets_in(header_b, in_at, scope);
      }
      if (is_kw(f, "with") || is_kw(f, "except")) {
        // 'as' targets
        int d2 = 0;
        for (size_t j = header_b; j < colon; ++j) {
          if (open_bracket(j)) ++d2;
          if (close_bracket(j)) --d2;
          if (d2 == 0 && is_kw(j, "as") && owner_[j] == scope) {
            size_t tb = j + 1;
            size_t te = tb;
            int d3 = 0;
            while (te < colon) {
              if (open_bracket(te)) ++d3;
              if (close_bracket(te)) --d3;
              if (d3 == 0 && is_op(te, ",")) break;
              ++te;
            }
            if (is_kw(f, "except")) {
              for (size_t t = tb; t < te; ++t) {
                if (toks_[t].kind == LexKind::kIdent) {
                  bind(scope, text(t), kBindExcept);
                }
              }
            } else {
              bind_targets_in(tb, te, scope);
            }
          }
        }
      }
      if (colon < st.last) owner_[colon] = scope;
      if (colon + 1 < st.last) process_simple(colon + 1, st.last, scope);
      process_block(stmts, i + 1, child_hi, scope);
    } else if (is_op(f, "@")) {
      owner_[f] = scope;
      expr_walk(f + 1, st.last, scope);
    } else if (toks_[f].kind == LexKind::kIdent && text(f) == "match" &&
               st.last > f + 1 && is_op(st.last - 1, ":") &&
               child_hi > i + 1) {
      // match statement: case patterns bind in ways this analyzer does not
      // model, so the surrounding scopes are ruled out entirely
      disqualify_chain(scope);
      expr_walk(f, st.last, scope);
      process_block(stmts, i + 1, child_hi, scope);
    } else {
      process_simple(f, st.last, scope);
    }
    i = child_hi;
  }
}

void Analyzer::resolve_occurrences() {
  // (scope, name) -> site occurrence list, assembled in token order.
  std::map<std::pair<int, std::string>, std::vector<ByteSpan>> occ;

  for (size_t i = 0; i < toks_.size(); ++i) {
    if (toks_[i].kind != LexKind::kIdent) continue;
    std::string name(text(i));
    out_.identifier_universe.insert(name);
    if (role_[i] != Role::kUse) continue;

    int cur = owner_[i];
    int origin = cur;
    int resolved = -1;
    while (cur != -1) {
      Scope& sc = scopes_[cur];
      bool provider = (cur == origin) || sc.type != Scope::kClass;
      if (provider) {
        if (sc.global_decl.count(name)) {
          resolved = 0;  // declared global: lives at module scope
          break;
        }
        if (sc.nonlocal_decl.count(name)) {
          cur = sc.parent;
          continue;
        }
        auto it = sc.binds.find(name);
        if (it != sc.binds.end()) {
          resolved = cur;
          break;
        }
      }
      cur = sc.parent;
    }
    if (resolved < 0) continue;  // builtin or undefined: not ours
    Scope::Type t = scopes_[resolved].type;
    if (t == Scope::kFunction || t == Scope::kLambda || t == Scope::kComp) {
      occ[{resolved, name}].push_back(ByteSpan{toks_[i].begin, toks_[i].end});
    }
  }

  for (auto& [key, spans] : occ) {
    const auto& [scope_id, name] = key;
    const Scope& sc = scopes_[scope_id];
    if (sc.disq) continue;
    auto it = sc.binds.find(name);
    if (it == sc.binds.end()) continue;
    uint8_t bits = it->second;
    if (bits & (kBindFunc | kBindClass | kBindImport | kBindExcept)) continue;
    if ((bits & (kBindParam | kBindAssign)) == 0) continue;
    if (is_python_builtin(name) || is_python_soft_keyword(name)) continue;
    if (name == "self" || name == "cls") continue;  // convention guard

    VariableSite site;
    site.name = name;
    site.scope_id = scope_id;
    site.kind = (bits & kBindParam) ? SiteKind::kParameter
                                    : SiteKind::kLocalAssign;
    site.occurrences = spans;  // token order == byte order
    out_.sites.push_back(std::move(site));
  }

  std::sort(out_.sites.begin(), out_.sites.end(),
            [](const VariableSite& a, const VariableSite& b) {
              return a.first_occurrence().begin < b.first_occurrence().begin;
            });
}

ScopeAnalysis Analyzer::run() {
  auto stmts = split_statements();
  process_block(stmts, 0, stmts.size(), 0);
  for (int root : disq_roots_) {
    int cur = root;
    while (cur != -1 && !scopes_[cur].disq) {
      scopes_[cur].disq = true;
      cur = scopes_[cur].parent;
    }
  }
  resolve_occurrences();
  out_.ok = true;
  return std::move(out_);
}

}  // namespace

ScopeAnalysis analyze_python(std::string_view src) {
  LexResult lexed = lex_python(src);
  if (!lexed.ok) {
    ScopeAnalysis out;
    out.ok = false;
    out.error = lexed.error;
    return out;
  }
  Analyzer analyzer(src, lexed.tokens);
  return analyzer.run();
}

}  // namespace tracemark::py
