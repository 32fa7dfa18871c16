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

#include "tracemark/pylex.hpp"

#include <algorithm>
#include <array>
#include <unordered_set>

namespace tracemark::py {

namespace {

const std::unordered_set<std::string_view> kKeywords = {
    "False",  "None",   "True",    "and",    "as",     "assert", "async",
    "await",  "break",  "class",   "continue", "def",  "del",    "elif",
    "else",   "except", "finally", "for",    "from",   "global", "if",
    "import", "in",     "is",      "lambda", "nonlocal", "not",  "or",
    "pass",   "raise",  "return",  "try",    "while",  "with",   "yield"};

const std::unordered_set<std::string_view> kSoftKeywords = {"match", "case"};

const std::unordered_set<std::string_view> kBuiltins = {
    "ArithmeticError", "AssertionError", "AttributeError", "BaseException",
    "BlockingIOError", "BrokenPipeError", "BufferError", "BytesWarning",
    "ChildProcessError", "ConnectionAbortedError", "ConnectionError",
    "ConnectionRefusedError", "ConnectionResetError", "DeprecationWarning",
    "EOFError", "Ellipsis", "EncodingWarning", "EnvironmentError",
    "Exception", "FileExistsError", "FileNotFoundError", "FloatingPointError",
    "FutureWarning", "GeneratorExit", "IOError", "ImportError",
    "ImportWarning", "IndentationError", "IndexError", "InterruptedError",
    "IsADirectoryError", "KeyError", "KeyboardInterrupt", "LookupError",
    "MemoryError", "ModuleNotFoundError", "NameError", "NotADirectoryError",
    "NotImplemented", "NotImplementedError", "OSError", "OverflowError",
    "PendingDeprecationWarning", "PermissionError", "ProcessLookupError",
    "RecursionError", "ReferenceError", "ResourceWarning", "RuntimeError",
    "RuntimeWarning", "StopAsyncIteration", "StopIteration", "SyntaxError",
    "SyntaxWarning", "SystemError", "SystemExit", "TabError", "TimeoutError",
    "TypeError", "UnboundLocalError", "UnicodeDecodeError",
    "UnicodeEncodeError", "UnicodeError", "UnicodeTranslateError",
    "UnicodeWarning", "UserWarning", "ValueError", "Warning",
    "ZeroDivisionError", "__debug__", "__doc__", "__import__", "__name__",
    "abs", "aiter", "all", "anext", "any", "ascii", "bin", "bool",
    "breakpoint", "bytearray", "bytes", "callable", "chr", "classmethod",
    "compile", "complex", "copyright", "credits", "delattr", "dict", "dir",
    "divmod", "enumerate", "eval", "exec", "exit", "filter", "float",
    "format", "frozenset", "getattr", "globals", "hasattr", "hash", "help",
    "hex", "id", "input", "int", "isinstance", "issubclass", "iter", "len",
    "license", "list", "locals", "map", "max", "memoryview", "min", "next",
    "object", "oct", "open", "ord", "pow", "print", "property", "quit",
    "range", "repr", "reversed", "round", "set", "setattr", "slice",
    "sorted", "staticmethod", "str", "sum", "super", "tuple", "type",
    "vars", "zip"};

// Multi-character operators, longest first within each leading character.
const char* const kOps3[] = {"**=", "//=", ">>=", "<<=", "..."};
const char* const kOps2[] = {"**", "//", ">>", "<<", "<=", ">=", "==", "!=",
                             "->", ":=", "+=", "-=", "*=", "/=", "%=", "@=",
                             "&=", "|=", "^="};

bool ident_start(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}
bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }
bool digit(char c) { return c >= '0' && c <= '9'; }

bool is_string_prefix(std::string_view s) {
  if (s.size() > 2) return false;
  for (char c : s) {
    char l = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (l != 'r' && l != 'b' && l != 'u' && l != 'f') return false;
  }
  return true;
}

}  // namespace

bool is_python_keyword(std::string_view s) { return kKeywords.count(s) > 0; }
bool is_python_soft_keyword(std::string_view s) {
  return kSoftKeywords.count(s) > 0;
}
bool is_python_builtin(std::string_view s) { return kBuiltins.count(s) > 0; }

bool is_valid_identifier(std::string_view s) {
  if (s.empty() || !ident_start(s[0])) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return ident_char(c); });
}

LexResult lex_python(std::string_view src) {
  LexResult res;
  size_t pos = 0;
  int depth = 0;
  bool line_has_tokens = false;

  auto push = [&res](LexKind k, size_t b, size_t e, uint8_t flags = 0) {
    res.tokens.push_back(Lexeme{k, flags, static_cast<uint32_t>(b),
                                static_cast<uint32_t>(e)});
  };
  auto fail = [&res](size_t at, const std::string& why) {
    res.ok = false;
    res.error = "byte " + std::to_string(at) + ": " + why;
    return res;
  };

  while (pos < src.size()) {
    char c = src[pos];

    if (c == ' ' || c == '\t') {
      ++pos;
      continue;
    }
    if (c == '\r') {
      ++pos;
      continue;
    }
    if (c == '\n') {
      if (depth == 0 && line_has_tokens) {
        push(LexKind::kNewline, pos, pos + 1);
        line_has_tokens = false;
      }
      ++pos;
      continue;
    }
    if (c == '#') {
      while (pos < src.size() && src[pos] != '\n') ++pos;
      continue;
    }
    if (c == '\\') {
      size_t nl = pos + 1;
      if (nl < src.size() && src[nl] == '\r') ++nl;
      if (nl < src.size() && src[nl] == '\n') {
        pos = nl + 1;
        continue;
      }
      return fail(pos, "stray backslash");
    }

    if (ident_start(c)) {
      size_t end = pos + 1;
      while (end < src.size() && ident_char(src[end])) ++end;
      std::string_view word = src.substr(pos, end - pos);
      // String prefix? (r"", f"", rb""...)
      if (end < src.size() && (src[end] == '"' || src[end] == '\'') &&
          is_string_prefix(word)) {
        // fall through to string scanning with the prefix attached
      } else {
        push(is_python_keyword(word) ? LexKind::kKeyword : LexKind::kIdent,
             pos, end);
        line_has_tokens = true;
        pos = end;
        continue;
      }
      // string with prefix: scan below starting at the quote
      bool fstr = false, raw = false;
      for (char pc : word) {
        char l = static_cast<char>(std::tolower(static_cast<unsigned char>(pc)));
        if (l == 'f') fstr = true;
        if (l == 'r') raw = true;
      }
      size_t start = pos;
      size_t q = end;
      char quote = src[q];
      bool triple = q + 2 < src.size() && src[q + 1] == quote &&
                    src[q + 2] == quote;
      size_t body = q + (triple ? 3 : 1);
      bool has_brace = false;
      size_t i = body;
      bool closed = false;
      while (i < src.size()) {
        char sc = src[i];
        if (sc == '\\' && !raw) {
          i += 2;
          continue;
        }
        if (sc == '\\' && raw) {
          i += 2;  // raw strings still cannot end on the escaped quote
          continue;
        }
        if (sc == '{' || sc == '}') has_brace = true;
        if (sc == quote) {
          if (!triple) {
            closed = true;
            i += 1;
            break;
          }
          if (i + 2 < src.size() && src[i + 1] == quote &&
              src[i + 2] == quote) {
            closed = true;
            i += 3;
            break;
          }
        }
        if (sc == '\n' && !triple) {
          return fail(i, "unterminated string literal");
        }
        ++i;
      }
      if (!closed) return fail(start, "unterminated string literal");
      uint8_t flags = 0;
      if (fstr) {
        flags |= kFlagFString;
        if (has_brace) flags |= kFlagHasBraces;
      }
      push(LexKind::kString, start, i, flags);
      line_has_tokens = true;
      pos = i;
      continue;
    }

    if (c == '"' || c == '\'') {
      size_t start = pos;
      char quote = c;
      bool triple = pos + 2 < src.size() && src[pos + 1] == quote &&
                    src[pos + 2] == quote;
      size_t i = pos + (triple ? 3 : 1);
      bool closed = false;
      while (i < src.size()) {
        char sc = src[i];
        if (sc == '\\') {
          i += 2;
          continue;
        }
        if (sc == quote) {
          if (!triple) {
            closed = true;
            i += 1;
            break;
          }
          if (i + 2 < src.size() && src[i + 1] == quote &&
              src[i + 2] == quote) {
            closed = true;
            i += 3;
            break;
          }
        }
        if (sc == '\n' && !triple) return fail(i, "unterminated string");
        ++i;
      }
      if (!closed) return fail(start, "unterminated string");
      push(LexKind::kString, start, i);
      line_has_tokens = true;
      pos = i;
      continue;
    }

    if (digit(c) || (c == '.' && pos + 1 < src.size() && digit(src[pos + 1]))) {
      size_t end = pos;
      if (src[end] == '0' && end + 1 < src.size() &&
          (src[end + 1] == 'x' || src[end + 1] == 'X' || src[end + 1] == 'o' ||
           src[end + 1] == 'O' || src[end + 1] == 'b' || src[end + 1] == 'B')) {
        end += 2;
        while (end < src.size() &&
               (ident_char(src[end]) || src[end] == '_')) ++end;
      } else {
        while (end < src.size() && (digit(src[end]) || src[end] == '_')) ++end;
        if (end < src.size() && src[end] == '.') {
          ++end;
          while (end < src.size() && (digit(src[end]) || src[end] == '_'))
            ++end;
        }
        if (end < src.size() && (src[end] == 'e' || src[end] == 'E')) {
          size_t e = end + 1;
          if (e < src.size() && (src[e] == '+' || src[e] == '-')) ++e;
          if (e < src.size() && digit(src[e])) {
            end = e;
            while (end < src.size() && (digit(src[end]) || src[end] == '_'))
              ++end;
          }
        }
        if (end < src.size() && (src[end] == 'j' || src[end] == 'J')) ++end;
      }
      push(LexKind::kNumber, pos, end);
      line_has_tokens = true;
      pos = end;
      continue;
    }

    // Operators and punctuation.
    {
      auto try_op = [&](const char* const* table, size_t count,
                        size_t len) -> bool {
        if (pos + len > src.size()) return false;
        std::string_view candidate = src.substr(pos, len);
        for (size_t t = 0; t < count; ++t) {
          if (candidate == table[t]) return true;
        }
        return false;
      };
      size_t oplen = 0;
      if (try_op(kOps3, std::size(kOps3), 3)) {
        oplen = 3;
      } else if (try_op(kOps2, std::size(kOps2), 2)) {
        oplen = 2;
      } else {
        static const std::string_view singles = "+-*/%@<>=&|^~!(),:.;[]{}";
        if (singles.find(c) != std::string_view::npos) oplen = 1;
      }
      if (oplen == 0) {
        return fail(pos, "unrecognized byte 0x" + std::to_string(int(
                             static_cast<unsigned char>(c))));
      }
      if (c == '(' || c == '[' || c == '{') ++depth;
      if (c == ')' || c == ']' || c == '}') {
        --depth;
        if (depth < 0) return fail(pos, "unbalanced brackets");
      }
      push(LexKind::kOp, pos, pos + oplen);
      line_has_tokens = true;
      pos += oplen;
      continue;
    }
  }

  if (depth != 0) return fail(src.size(), "unbalanced brackets at EOF");
  if (line_has_tokens) {
    push(LexKind::kNewline, src.size(), src.size());
  }
  res.ok = true;
  return res;
}

}  // namespace tracemark::py
