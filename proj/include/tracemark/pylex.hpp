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

#ifndef TRACEMARK_PYLEX_HPP
#define TRACEMARK_PYLEX_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tracemark::py {

enum class LexKind : uint8_t {
  kIdent,
  kKeyword,
  kNumber,
  kString,
  kOp,
  kNewline,  // logical end of statement (depth 0, not continued)
};

enum LexFlags : uint8_t {
  kFlagFString = 1,
  kFlagHasBraces = 2,  // f-string contains '{' or '}'
};

struct Lexeme {
  LexKind kind;
  uint8_t flags = 0;
  uint32_t begin = 0;
  uint32_t end = 0;
};

struct LexResult {
  bool ok = false;
  std::string error;
  std::vector<Lexeme> tokens;
};

// Lexes Python source into a flat token stream. Comments and whitespace are
// dropped; logical newlines (outside brackets, not backslash-continued)
// become kNewline tokens. ASCII-only outside string literals and comments;
// anything the lexer cannot classify fails the whole file, which callers
// treat as "skip with diagnostic".
LexResult lex_python(std::string_view src);

bool is_python_keyword(std::string_view s);
bool is_python_soft_keyword(std::string_view s);
bool is_python_builtin(std::string_view s);
bool is_valid_identifier(std::string_view s);

}  // namespace tracemark::py

#endif  // TRACEMARK_PYLEX_HPP
