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

#ifndef TRACEMARK_METRICS_HPP
#define TRACEMARK_METRICS_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "tracemark/manifest.hpp"

// Imperceptibility accounting: how much did marking actually change.
// Renames substitute one token per occurrence, so for marked files the
// token-level edit distance equals the number of renamed occurrences.

namespace tracemark::metrics {

// Levenshtein distance over audit-tokenizer token ids.
int64_t token_edit_distance(std::string_view original_bytes,
                            std::string_view marked_bytes);

struct FileImpact {
  std::string path;
  int64_t lines = 0;
  int64_t marks_injected = 0;
  int64_t occurrences_renamed = 0;  // from the manifest
  int64_t tokens_modified = 0;      // measured edit distance
  double edit_distance_per_100_loc = 0.0;
  std::string note;  // non-empty when a file could not be measured
};

struct ImpactSummary {
  std::vector<FileImpact> files;
  int64_t total_lines = 0;
  int64_t total_marks = 0;
  int64_t total_occurrences_renamed = 0;
  int64_t total_tokens_modified = 0;
  double edit_distance_per_100_loc = 0.0;

  std::string to_csv() const;
};

ImpactSummary impact_summary(const manifest::RepoManifest& mf,
                             const std::filesystem::path& original_root,
                             const std::filesystem::path& marked_root);

}  // namespace tracemark::metrics

#endif  // TRACEMARK_METRICS_HPP
