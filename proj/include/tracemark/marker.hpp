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

#ifndef TRACEMARK_MARKER_HPP
#define TRACEMARK_MARKER_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tracemark/astmark.hpp"
#include "tracemark/manifest.hpp"
#include "tracemark/mock_model.hpp"
#include "tracemark/model.hpp"

namespace tracemark::marker {

struct MarkParams {
  int m = 100;
  int64_t sparsity_k = 100;     // at most one mark per K lines
  int64_t rank_threshold = 500; // minimum oracle rank P of a first occurrence
};

struct MarkedFile {
  std::string bytes;
  manifest::FileManifest file_manifest;
  std::vector<std::string> diagnostics;
};

// Runs the single-file marking pipeline: extract local variables, keep sites
// whose first-occurrence oracle rank on the original file is >= R, sample
// down to the floor(L/K) budget, then in ascending position order rebuild
// each candidate set on the incrementally marked prefix, draw the published
// variant uniformly, and apply the whole-scope rename.
MarkedFile mark_file(std::string_view file_bytes, std::string_view relpath,
                     const model::LogitsProvider& oracle,
                     const MarkParams& params, uint64_t seed);

struct MarkedRepo {
  manifest::RepoManifest repo_manifest;
  std::vector<std::string> diagnostics;
};

// Marks every file matching the include globs (default *.py) under
// src_root, writes the marked tree plus verbatim copies of everything else
// to out_root, and returns the manifest. Files are processed in
// lexicographic relative-path order; out_root must not already contain
// files (all-or-nothing).
MarkedRepo mark_repository(const std::filesystem::path& src_root,
                           const std::filesystem::path& out_root,
                           const model::LogitsProvider& oracle,
                           const MarkParams& params, uint64_t seed,
                           const std::vector<std::string>& include_globs = {
                               "*.py"});

// --- shared per-file walk -------------------------------------------------
//
// Marking and detection must make bit-identical candidate decisions. Both
// sides step through a file's marks in ascending first-occurrence order over
// the same file states: state j has marks 1..j-1 renamed to their published
// names and everything later still original. All occurrences of a variable
// sit at or after its first occurrence, so the token prefix before mark j is
// identical in state j and in the published file; and because renames are
// token-for-token substitutions, token indices never shift between states.

struct WalkStep {
  py::VariableSite site;           // matched in the current state
  int64_t token_index = 0;         // first occurrence, audit-token coords
  std::vector<tok::TokenId> prefix;
  tok::TokenId original_id = -1;
  bool merged_context = false;     // first occurrence carries a leading space
  model::CandidateSet candidates;
};

// Builds the candidate step for the site whose first occurrence sits at
// token_index in `state` and is named `name`. min_rank, when positive,
// additionally requires the recomputed oracle rank P >= min_rank.
// Throws PositionIneligibleError when no valid candidate set exists;
// InternalError when the state does not contain such a site.
WalkStep build_walk_step(const std::string& state, int64_t token_index,
                         std::string_view name,
                         const model::LogitsProvider& oracle, int m,
                         int64_t min_rank);

// Identifier text of a candidate token (leading space stripped).
std::string candidate_identifier(tok::TokenId token);

// Aligns a site's first occurrence to one audit token; empty when the name
// does not tokenize to a single token there.
std::optional<int64_t> first_occurrence_token_index(
    const std::vector<tok::Token>& tokens, const py::VariableSite& site);

}  // namespace tracemark::marker

#endif  // TRACEMARK_MARKER_HPP
