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

#ifndef TRACEMARK_MANIFEST_HPP
#define TRACEMARK_MANIFEST_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "tracemark/tokenizer.hpp"

// The repository owner's private record of where marks live. Sufficient to
// reconstruct every candidate set from the published tree; anyone holding it
// can strip the marks, so it is written with owner-only permissions and must
// never be published.

namespace tracemark::manifest {

struct TokenInfo {
  tok::TokenId id = -1;
  std::string text;
  bool operator==(const TokenInfo&) const = default;
};

struct MarkRecord {
  // Position of the variable's first occurrence in audit-tokenizer
  // coordinates. Renames substitute token-for-token, so this index is
  // identical in the original, partially marked, and published files.
  int64_t token_index = 0;
  // Identifier byte span of the first occurrence in the published file.
  uint32_t byte_begin = 0;
  uint32_t byte_end = 0;
  TokenInfo original_token;
  TokenInfo published_token;
  int m = 0;
  int64_t oracle_rank = 0;  // P on the marked prefix at marking time
  int64_t occurrences = 0;  // occurrence count of the renamed variable
  std::string candidate_fingerprint;
};

struct FileManifest {
  std::string path;  // relative, '/'-separated
  std::string pre_mark_sha256;
  std::string post_mark_sha256;
  int64_t line_count = 0;
  int64_t budget = 0;  // floor(L / K)
  std::vector<MarkRecord> marks;  // ascending token_index
};

struct OracleDescriptor {
  std::string model_id;
  std::string tokenizer_id;
  bool operator==(const OracleDescriptor&) const = default;
};

struct RepoManifest {
  int schema_version = 1;
  OracleDescriptor oracle;
  int m = 100;
  int64_t sparsity_k = 100;
  int64_t rank_threshold_r = 500;
  uint64_t seed = 0;
  std::string rng_scheme = "splitmix64/xoshiro256** labelled streams v1";
  std::vector<FileManifest> files;

  int64_t file_count() const { return static_cast<int64_t>(files.size()); }
  int64_t total_marks() const;
};

std::string to_json(const RepoManifest& m);
RepoManifest from_json(const std::string& text);

// Atomic write (temp file + rename) with owner-only permissions.
void save_private(const RepoManifest& m, const std::filesystem::path& path);
RepoManifest load(const std::filesystem::path& path);

}  // namespace tracemark::manifest

#endif  // TRACEMARK_MANIFEST_HPP
