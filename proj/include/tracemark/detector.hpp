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

#ifndef TRACEMARK_DETECTOR_HPP
#define TRACEMARK_DETECTOR_HPP

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tracemark/manifest.hpp"
#include "tracemark/marker.hpp"
#include "tracemark/model.hpp"
#include "tracemark/ranksum.hpp"

namespace tracemark::detector {

enum class Decision { kDetected, kNotDetected, kUndetectable };

struct MarkResult {
  std::string file;
  int64_t token_index = 0;
  int64_t rank = 0;  // in [1, m]
};

struct DroppedItem {
  std::string file;
  int64_t token_index = -1;  // -1: the whole file
  std::string reason;
};

struct DetectionReport {
  int64_t n = 0;  // surviving marks
  int m = 0;
  std::string p_text;  // the requested bound, exactly as given
  std::optional<int64_t> threshold;
  int64_t rank_sum = 0;
  Decision decision = Decision::kUndetectable;
  // exact Pr(S' <= S) under the null, over denominator m^n
  std::string p_value_num;
  std::string p_value_den;
  double p_value_approx = 0.0;
  std::vector<MarkResult> marks;
  std::vector<DroppedItem> dropped;

  std::string to_json() const;  // bit-stable serialization
  std::string decision_text() const;
};

// Reads published file bytes by manifest-relative path.
using FileReader = std::function<std::optional<std::string>(const std::string&)>;

// Replays the manifest against the published tree: verifies digests,
// reconstructs each candidate set on the published prefix, checks the
// fingerprint, queries the target for the published token's loss rank, and
// decides S <= T against the exact threshold at the requested bound.
// Tampered files and fingerprint mismatches are dropped (with diagnostics)
// before the threshold is computed, never after.
DetectionReport detect(const FileReader& read_published,
                       const manifest::RepoManifest& mf,
                       const model::LogitsProvider& target,
                       const model::LogitsProvider& oracle,
                       const std::string& p_text);

DetectionReport detect(const std::filesystem::path& published_root,
                       const manifest::RepoManifest& mf,
                       const model::LogitsProvider& target,
                       const model::LogitsProvider& oracle,
                       const std::string& p_text);

// Exact Pr(S' <= s) for n marks of m versions; s must lie in [n, n*m].
BigRat pvalue(int64_t n, int64_t m, int64_t s);

}  // namespace tracemark::detector

#endif  // TRACEMARK_DETECTOR_HPP
