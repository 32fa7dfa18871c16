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

#include "tracemark/astmark.hpp"

#include <algorithm>

namespace tracemark::ast {

ScopeAnalysis extract_local_variables(std::string_view file_bytes,
                                      std::string_view language) {
  if (language != "python") {
    throw ConfigError("unsupported language '" + std::string(language) +
                      "' (only 'python' is wired up)");
  }
  return py::analyze_python(file_bytes);
}

bool lexically_valid_name(std::string_view name) {
  return py::is_valid_identifier(name) && !py::is_python_keyword(name) &&
         !py::is_python_soft_keyword(name) && !py::is_python_builtin(name);
}

std::string apply_rename(std::string_view file_bytes, const VariableSite& site,
                         std::string_view new_name) {
  if (new_name == site.name) return std::string(file_bytes);

  std::string out;
  out.reserve(file_bytes.size() + site.occurrences.size() * new_name.size());
  size_t cursor = 0;
  for (const ByteSpan& span : site.occurrences) {
    if (span.begin < cursor || span.end > file_bytes.size()) {
      throw InternalError("apply_rename: occurrence spans out of order");
    }
    std::string_view old = file_bytes.substr(span.begin, span.end - span.begin);
    if (old != site.name) {
      throw InternalError("apply_rename: span does not hold the site name");
    }
    out.append(file_bytes.substr(cursor, span.begin - cursor));
    out.append(new_name);
    cursor = span.end;
  }
  out.append(file_bytes.substr(cursor));

  // The edit may only have substituted identifier tokens at the occurrence
  // positions; everything else in the lexical stream must be untouched.
  py::LexResult before = py::lex_python(file_bytes);
  py::LexResult after = py::lex_python(out);
  if (!before.ok || !after.ok ||
      before.tokens.size() != after.tokens.size()) {
    throw InternalError("apply_rename: edited file no longer parses");
  }
  size_t next_occ = 0;
  for (size_t i = 0; i < before.tokens.size(); ++i) {
    const auto& a = before.tokens[i];
    const auto& b = after.tokens[i];
    std::string_view at = file_bytes.substr(a.begin, a.end - a.begin);
    std::string_view bt =
        std::string_view(out).substr(b.begin, b.end - b.begin);
    bool renamed_here = next_occ < site.occurrences.size() &&
                        a.begin == site.occurrences[next_occ].begin;
    if (renamed_here) {
      ++next_occ;
      if (a.kind != b.kind || at != site.name || bt != new_name) {
        throw InternalError("apply_rename: substitution mismatch");
      }
    } else if (a.kind != b.kind || at != bt) {
      throw InternalError("apply_rename: edit leaked outside the rename");
    }
  }
  if (next_occ != site.occurrences.size()) {
    throw InternalError("apply_rename: lost a rename occurrence");
  }
  return out;
}

int64_t count_lines(std::string_view file_bytes) {
  if (file_bytes.empty()) return 0;
  int64_t lines = 0;
  for (char c : file_bytes) {
    if (c == '\n') ++lines;
  }
  if (file_bytes.back() != '\n') ++lines;
  return lines;
}

}  // namespace tracemark::ast
