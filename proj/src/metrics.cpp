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

#include "tracemark/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <vector>

#include "tracemark/manifest.hpp"
#include "tracemark/tokenizer.hpp"

namespace tracemark::metrics {

int64_t token_edit_distance(std::string_view original_bytes,
                            std::string_view marked_bytes) {
  const auto& vocab = tok::Vocabulary::instance();
  auto ta = vocab.encode(original_bytes);
  auto tb = vocab.encode(marked_bytes);
  std::vector<tok::TokenId> a, b;
  a.reserve(ta.size());
  b.reserve(tb.size());
  for (const auto& t : ta) a.push_back(t.id);
  for (const auto& t : tb) b.push_back(t.id);

  // Trim the common prefix and suffix; the DP then runs on the edited core.
  size_t lo = 0;
  while (lo < a.size() && lo < b.size() && a[lo] == b[lo]) ++lo;
  size_t ra = a.size(), rb = b.size();
  while (ra > lo && rb > lo && a[ra - 1] == b[rb - 1]) {
    --ra;
    --rb;
  }
  size_t na = ra - lo, nb = rb - lo;
  if (na == 0) return static_cast<int64_t>(nb);
  if (nb == 0) return static_cast<int64_t>(na);

  std::vector<int64_t> prev(nb + 1), cur(nb + 1);
  for (size_t j = 0; j <= nb; ++j) prev[j] = static_cast<int64_t>(j);
  for (size_t i = 1; i <= na; ++i) {
    cur[0] = static_cast<int64_t>(i);
    for (size_t j = 1; j <= nb; ++j) {
      int64_t sub = prev[j - 1] + (a[lo + i - 1] == b[lo + j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[nb];
}

namespace {

std::string fmt_density(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

std::string ImpactSummary::to_csv() const {
  std::string out =
      "path,lines,marks_injected,occurrences_renamed,tokens_modified,"
      "edit_distance_per_100_loc,note\n";
  for (const auto& f : files) {
    out += f.path + "," + std::to_string(f.lines) + "," +
           std::to_string(f.marks_injected) + "," +
           std::to_string(f.occurrences_renamed) + "," +
           std::to_string(f.tokens_modified) + "," +
           fmt_density(f.edit_distance_per_100_loc) + "," + f.note + "\n";
  }
  out += "TOTAL," + std::to_string(total_lines) + "," +
         std::to_string(total_marks) + "," +
         std::to_string(total_occurrences_renamed) + "," +
         std::to_string(total_tokens_modified) + "," +
         fmt_density(edit_distance_per_100_loc) + ",\n";
  return out;
}

ImpactSummary impact_summary(const manifest::RepoManifest& mf,
                             const std::filesystem::path& original_root,
                             const std::filesystem::path& marked_root) {
  ImpactSummary sum;
  auto read = [](const std::filesystem::path& p,
                 std::string& out) -> bool {
    std::ifstream in(p, std::ios::binary);
    if (!in) return false;
    out.assign((std::istreambuf_iterator<char>(in)),
               std::istreambuf_iterator<char>());
    return true;
  };

  for (const auto& f : mf.files) {
    FileImpact fi;
    fi.path = f.path;
    fi.lines = f.line_count;
    fi.marks_injected = static_cast<int64_t>(f.marks.size());
    for (const auto& r : f.marks) {
      if (r.published_token.id != r.original_token.id) {
        fi.occurrences_renamed += r.occurrences;
      }
    }

    std::string original, marked;
    if (!read(original_root / f.path, original) ||
        !read(marked_root / f.path, marked)) {
      fi.note = "missing file";
    } else {
      fi.tokens_modified = token_edit_distance(original, marked);
      if (fi.lines > 0) {
        fi.edit_distance_per_100_loc =
            100.0 * static_cast<double>(fi.tokens_modified) /
            static_cast<double>(fi.lines);
      }
    }

    sum.total_lines += fi.lines;
    sum.total_marks += fi.marks_injected;
    sum.total_occurrences_renamed += fi.occurrences_renamed;
    sum.total_tokens_modified += fi.tokens_modified;
    sum.files.push_back(std::move(fi));
  }
  if (sum.total_lines > 0) {
    sum.edit_distance_per_100_loc =
        100.0 * static_cast<double>(sum.total_tokens_modified) /
        static_cast<double>(sum.total_lines);
  }
  return sum;
}

}  // namespace tracemark::metrics
