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

#ifndef TRACEMARK_PYSCOPE_HPP
#define TRACEMARK_PYSCOPE_HPP

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "tracemark/pylex.hpp"

namespace tracemark::py {

struct ByteSpan {
  uint32_t begin = 0;
  uint32_t end = 0;
  bool operator==(const ByteSpan&) const = default;
};

enum class SiteKind : uint8_t { kParameter, kLocalAssign };

// One rename-eligible local variable: a name bound in exactly one
// function-like scope, with every identifier token that resolves to it.
struct VariableSite {
  std::string name;
  int scope_id = -1;
  SiteKind kind = SiteKind::kLocalAssign;
  std::vector<ByteSpan> occurrences;  // ordered by begin offset

  const ByteSpan& first_occurrence() const { return occurrences.front(); }
};

struct ScopeAnalysis {
  bool ok = false;
  std::string error;  // lex/parse failure; file should be skipped
  std::vector<VariableSite> sites;
  // Every identifier lexeme in the file, regardless of role. Candidate
  // names must not collide with anything in here.
  std::unordered_set<std::string> identifier_universe;
};

// Extracts rename-eligible local variables (parameters, assigned locals,
// loop and comprehension targets) with full occurrence lists. Scopes that
// contain namespace reflection or dynamic evaluation (eval, exec, compile,
// locals, globals, vars, dir), f-strings with interpolation, star imports,
// or match statements are excluded together with their enclosing scopes.
ScopeAnalysis analyze_python(std::string_view src);

}  // namespace tracemark::py

#endif  // TRACEMARK_PYSCOPE_HPP
