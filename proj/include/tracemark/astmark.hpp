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

#ifndef TRACEMARK_ASTMARK_HPP
#define TRACEMARK_ASTMARK_HPP

#include <string>
#include <string_view>

#include "tracemark/errors.hpp"
#include "tracemark/pyscope.hpp"

// Source-level marking support: local-variable discovery (pyscope), whole-
// scope renames, and the lexical validity checks shared by marking and
// detection. Only Python is wired up; the analysis entry point is selected
// by language id so other grammars can slot in later.

namespace tracemark::ast {

using py::ByteSpan;
using py::ScopeAnalysis;
using py::SiteKind;
using py::VariableSite;

// Parses the file and returns rename-eligible local variables. language must
// currently be "python".
ScopeAnalysis extract_local_variables(std::string_view file_bytes,
                                      std::string_view language);

// Replaces every occurrence of the site with new_name and verifies that the
// edit changed nothing but those identifier tokens (token stream isomorphism
// and re-parse). Throws InternalError when verification fails: broken code
// must never be shipped silently.
std::string apply_rename(std::string_view file_bytes, const VariableSite& site,
                         std::string_view new_name);

// Lexical half of candidate validity: a usable variable name that is not a
// keyword (hard or soft) and not a builtin. Collision and retokenization
// checks live with the callers that know the file state.
bool lexically_valid_name(std::string_view name);

// Physical line count; a trailing newline does not add a line.
int64_t count_lines(std::string_view file_bytes);

}  // namespace tracemark::ast

#endif  // TRACEMARK_ASTMARK_HPP
