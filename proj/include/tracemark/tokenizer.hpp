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

#ifndef TRACEMARK_TOKENIZER_HPP
#define TRACEMARK_TOKENIZER_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tracemark::tok {

using TokenId = int32_t;

struct Token {
  TokenId id;
  uint32_t begin;  // byte offset, inclusive
  uint32_t end;    // byte offset, exclusive
};

// Fixed, deterministic token space for the built-in audit tokenizer:
// 256 single-byte tokens followed by a generated word list where every word
// w contributes both "w" and " w" (space-merged) entries. The merged forms
// reproduce the leading-whitespace behaviour of subword tokenizers, which is
// what makes candidate retokenization checks meaningful.
class Vocabulary {
 public:
  static const Vocabulary& instance();

  size_t size() const { return strings_.size(); }
  const std::string& text(TokenId id) const { return strings_[id]; }
  std::optional<TokenId> id_of(std::string_view text) const;

  // Stable identifier recorded in manifests; marking and detection must
  // agree on it.
  const std::string& tokenizer_id() const { return tokenizer_id_; }

  // Tokenization rules (bit-exact):
  //  - a single space immediately followed by an identifier run merges with
  //    it when " run" is in the vocabulary;
  //  - identifier runs [A-Za-z_][A-Za-z0-9_]* map to one token when listed,
  //    otherwise they fall back to per-byte tokens;
  //  - every other byte is its own token.
  std::vector<Token> encode(std::string_view text) const;

 private:
  Vocabulary();
  std::vector<std::string> strings_;
  std::unordered_map<std::string_view, TokenId> lookup_;
  std::string tokenizer_id_;
};

inline bool is_ident_start(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}

inline bool is_ident_char(char c) {
  return is_ident_start(c) || (c >= '0' && c <= '9');
}

}  // namespace tracemark::tok

#endif  // TRACEMARK_TOKENIZER_HPP
