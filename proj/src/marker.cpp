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

#include "tracemark/marker.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "tracemark/hash.hpp"
#include "tracemark/rng.hpp"

namespace tracemark::marker {

namespace fs = std::filesystem;
using tok::Token;
using tok::TokenId;
using tok::Vocabulary;

std::string candidate_identifier(TokenId token) {
  const std::string& text = Vocabulary::instance().text(token);
  if (!text.empty() && text[0] == ' ') return text.substr(1);
  return text;
}

std::optional<int64_t> first_occurrence_token_index(
    const std::vector<Token>& tokens, const py::VariableSite& site) {
  const py::ByteSpan& span = site.first_occurrence();
  // tokens are sorted by begin offset
  auto it = std::partition_point(tokens.begin(), tokens.end(),
                                 [&](const Token& t) {
                                   return t.end <= span.begin;
                                 });
  if (it == tokens.end()) return std::nullopt;
  bool exact = it->begin == span.begin && it->end == span.end;
  bool merged = it->begin + 1 == span.begin && it->end == span.end;
  if (exact || merged) return it - tokens.begin();
  return std::nullopt;
}

namespace {

std::vector<TokenId> ids_of(const std::vector<Token>& tokens, size_t count) {
  std::vector<TokenId> out;
  out.reserve(count);
  for (size_t i = 0; i < count; ++i) out.push_back(tokens[i].id);
  return out;
}

const py::VariableSite* match_site(const py::ScopeAnalysis& analysis,
                                   const std::vector<Token>& tokens,
                                   int64_t token_index,
                                   std::string_view name) {
  for (const auto& site : analysis.sites) {
    if (site.name != name) continue;
    auto idx = first_occurrence_token_index(tokens, site);
    if (idx && *idx == token_index) return &site;
  }
  return nullptr;
}

// Candidate validity for one mark position. A candidate must decode to a
// usable identifier, re-tokenize to exactly the candidate token at the
// first occurrence (space-merge context included), keep one token per
// occurrence, and collide with nothing in the file. The original name is
// always acceptable (identity publication).
model::TokenFilter make_filter(const py::ScopeAnalysis& analysis,
                               const py::VariableSite& site,
                               const std::string& state, bool merged_context) {
  const Vocabulary& vocab = Vocabulary::instance();

  // occurrence contexts: whether each occurrence is preceded by a space
  std::vector<bool> occ_merged;
  occ_merged.reserve(site.occurrences.size());
  for (const auto& span : site.occurrences) {
    occ_merged.push_back(span.begin > 0 && state[span.begin - 1] == ' ');
  }

  return [&vocab, &analysis, site_name = site.name, occ_merged,
          merged_context](TokenId cand) {
    const std::string& text = vocab.text(cand);
    std::string ident = text;
    if (!ident.empty() && ident[0] == ' ') ident.erase(0, 1);
    if (!ast::lexically_valid_name(ident)) return false;

    // The token must be exactly what the first occurrence re-tokenizes to.
    auto expected = merged_context ? vocab.id_of(" " + ident)
                                   : vocab.id_of(ident);
    if (!expected || *expected != cand) return false;

    // Every occurrence must stay a single token after the rename.
    auto plain = vocab.id_of(ident);
    auto merged = vocab.id_of(" " + ident);
    for (bool m : occ_merged) {
      if (m ? !merged : !plain) return false;
    }

    if (ident == site_name) return true;  // identity
    return analysis.identifier_universe.count(ident) == 0;
  };
}

}  // namespace

WalkStep build_walk_step(const std::string& state, int64_t token_index,
                         std::string_view name,
                         const model::LogitsProvider& oracle, int m,
                         int64_t min_rank) {
  const Vocabulary& vocab = Vocabulary::instance();
  py::ScopeAnalysis analysis = py::analyze_python(state);
  if (!analysis.ok) {
    throw InternalError("walk: state no longer parses: " + analysis.error);
  }
  std::vector<Token> tokens = vocab.encode(state);
  const py::VariableSite* site =
      match_site(analysis, tokens, token_index, name);
  if (site == nullptr) {
    throw InternalError("walk: no site named '" + std::string(name) +
                        "' at token " + std::to_string(token_index));
  }

  WalkStep step;
  step.site = *site;
  step.token_index = token_index;
  step.original_id = tokens[static_cast<size_t>(token_index)].id;
  step.merged_context =
      tokens[static_cast<size_t>(token_index)].begin + 1 ==
      site->first_occurrence().begin;
  step.prefix = ids_of(tokens, static_cast<size_t>(token_index));

  auto filter = make_filter(analysis, *site, state, step.merged_context);
  step.candidates = model::build_candidate_set(oracle, step.prefix,
                                               step.original_id, m, filter);
  if (min_rank > 0 && step.candidates.oracle_rank < min_rank) {
    throw PositionIneligibleError(
        "recomputed oracle rank " +
        std::to_string(step.candidates.oracle_rank) + " fell below R=" +
        std::to_string(min_rank));
  }
  return step;
}

MarkedFile mark_file(std::string_view file_bytes, std::string_view relpath,
                     const model::LogitsProvider& oracle,
                     const MarkParams& params, uint64_t seed) {
  const Vocabulary& vocab = Vocabulary::instance();
  MarkedFile out;
  out.bytes = std::string(file_bytes);

  manifest::FileManifest& fm = out.file_manifest;
  fm.path = std::string(relpath);
  fm.pre_mark_sha256 = sha256_hex(file_bytes);
  fm.line_count = ast::count_lines(file_bytes);
  fm.budget = params.sparsity_k > 0 ? fm.line_count / params.sparsity_k : 0;

  auto done_unmarked = [&](const std::string& why) {
    if (!why.empty()) {
      out.diagnostics.push_back(fm.path + ": " + why);
    }
    fm.post_mark_sha256 = fm.pre_mark_sha256;
    return std::move(out);
  };

  if (fm.budget == 0) return done_unmarked("");

  py::ScopeAnalysis analysis = py::analyze_python(file_bytes);
  if (!analysis.ok) {
    return done_unmarked("skipped (parse): " + analysis.error);
  }
  if (analysis.sites.empty()) return done_unmarked("");

  std::vector<Token> tokens = vocab.encode(file_bytes);

  // Eligibility screening on the original file: single-token names whose
  // first-occurrence oracle rank is >= R.
  struct Selected {
    int64_t token_index;
    std::string name;
  };
  std::vector<Selected> eligible;
  for (const auto& site : analysis.sites) {
    auto idx = first_occurrence_token_index(tokens, site);
    if (!idx) continue;  // name is not a single audit token here
    std::vector<TokenId> prefix = ids_of(tokens, static_cast<size_t>(*idx));
    auto scores = oracle.full_logits(prefix);
    int64_t rank =
        model::logits_rank(scores, tokens[static_cast<size_t>(*idx)].id);
    if (rank >= params.rank_threshold) {
      eligible.push_back({*idx, site.name});
    }
  }
  if (eligible.empty()) return done_unmarked("");

  std::sort(eligible.begin(), eligible.end(),
            [](const Selected& a, const Selected& b) {
              return a.token_index < b.token_index;
            });

  // Budget subsample, uniform without replacement. The site-selection and
  // publication streams are independent and keyed per file so other files
  // never perturb this one's draws.
  if (static_cast<int64_t>(eligible.size()) > fm.budget) {
    Rng pick = derive_rng(seed, "site-select", fnv1a64(relpath));
    std::vector<Selected> pool = std::move(eligible);
    eligible.clear();
    for (int64_t k = 0; k < fm.budget; ++k) {
      size_t at = static_cast<size_t>(pick.below(pool.size()));
      eligible.push_back(pool[at]);
      pool.erase(pool.begin() + static_cast<ptrdiff_t>(at));
    }
    std::sort(eligible.begin(), eligible.end(),
              [](const Selected& a, const Selected& b) {
                return a.token_index < b.token_index;
              });
  }

  Rng publish = derive_rng(seed, "publish", fnv1a64(relpath));
  std::string state = std::string(file_bytes);

  for (const Selected& sel : eligible) {
    WalkStep step;
    try {
      step = build_walk_step(state, sel.token_index, sel.name, oracle,
                             params.m, params.rank_threshold);
    } catch (const PositionIneligibleError& e) {
      // budget is not refunded
      out.diagnostics.push_back(fm.path + ": site '" + sel.name +
                                "' skipped: " + e.what());
      continue;
    }

    size_t draw = static_cast<size_t>(
        publish.below(step.candidates.tokens.size()));
    TokenId published = step.candidates.tokens[draw];
    std::string published_ident = candidate_identifier(published);

    if (published_ident != sel.name) {
      state = ast::apply_rename(state, step.site, published_ident);
    }

    manifest::MarkRecord rec;
    rec.token_index = sel.token_index;
    rec.original_token = {step.original_id,
                          vocab.text(step.original_id)};
    rec.published_token = {published, vocab.text(published)};
    rec.m = params.m;
    rec.oracle_rank = step.candidates.oracle_rank;
    rec.occurrences = static_cast<int64_t>(step.site.occurrences.size());
    rec.candidate_fingerprint = step.candidates.fingerprint();
    fm.marks.push_back(std::move(rec));
  }

  // Final byte spans in published coordinates.
  std::vector<Token> final_tokens = vocab.encode(state);
  for (auto& rec : fm.marks) {
    const Token& t = final_tokens[static_cast<size_t>(rec.token_index)];
    if (t.id != rec.published_token.id) {
      throw InternalError("marked file does not round-trip its own tokens");
    }
    bool merged = vocab.text(t.id)[0] == ' ';
    rec.byte_begin = t.begin + (merged ? 1 : 0);
    rec.byte_end = t.end;
  }

  out.bytes = std::move(state);
  fm.post_mark_sha256 = sha256_hex(out.bytes);
  return out;
}

namespace {

bool glob_match(std::string_view pattern, std::string_view text) {
  // '*' wildcard only (no '?'), matching across '/' like shell case
  // patterns applied to the basename-or-path.
  size_t p = 0, t = 0, star = std::string_view::npos, mark = 0;
  while (t < text.size()) {
    if (p < pattern.size() &&
        (pattern[p] == text[t])) {
      ++p;
      ++t;
    } else if (p < pattern.size() && pattern[p] == '*') {
      star = p++;
      mark = t;
    } else if (star != std::string_view::npos) {
      p = star + 1;
      t = ++mark;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '*') ++p;
  return p == pattern.size();
}

bool matches_any(const std::vector<std::string>& globs,
                 const std::string& relpath) {
  std::string base = relpath;
  if (auto pos = base.rfind('/'); pos != std::string::npos) {
    base = base.substr(pos + 1);
  }
  for (const auto& g : globs) {
    bool full = g.find('/') != std::string::npos;
    if (glob_match(g, full ? relpath : base)) return true;
  }
  return false;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + p.string());
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

void write_file(const fs::path& p, std::string_view bytes) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + p.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

bool valid_utf8(std::string_view s) {
  size_t i = 0;
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    int extra = c < 0x80 ? 0 : (c >> 5) == 0x6 ? 1 : (c >> 4) == 0xe ? 2
                : (c >> 3) == 0x1e ? 3 : -1;
    if (extra < 0 || i + static_cast<size_t>(extra) >= s.size()) {
      if (extra < 0) return false;
      return false;
    }
    for (int k = 1; k <= extra; ++k) {
      if ((static_cast<unsigned char>(s[i + static_cast<size_t>(k)]) >> 6) !=
          0x2) {
        return false;
      }
    }
    i += static_cast<size_t>(extra) + 1;
  }
  return true;
}

}  // namespace

MarkedRepo mark_repository(const fs::path& src_root, const fs::path& out_root,
                           const model::LogitsProvider& oracle,
                           const MarkParams& params, uint64_t seed,
                           const std::vector<std::string>& include_globs) {
  if (!fs::is_directory(src_root)) {
    throw ArgumentError("source root is not a directory: " +
                        src_root.string());
  }
  if (fs::exists(out_root)) {
    if (!fs::is_directory(out_root) || !fs::is_empty(out_root)) {
      throw ConfigError("output root must be a new or empty directory: " +
                        out_root.string());
    }
  }
  // Stage into a temp sibling so a failure never leaves a half-marked tree.
  fs::path stage = out_root;
  stage += ".staging";
  fs::remove_all(stage);
  fs::create_directories(stage);

  MarkedRepo out;
  manifest::RepoManifest& rm = out.repo_manifest;
  rm.oracle = {oracle.handle().model_id, oracle.handle().tokenizer_id};
  rm.m = params.m;
  rm.sparsity_k = params.sparsity_k;
  rm.rank_threshold_r = params.rank_threshold;
  rm.seed = seed;

  std::vector<std::string> rels;
  for (auto it = fs::recursive_directory_iterator(src_root);
       it != fs::recursive_directory_iterator(); ++it) {
    if (!it->is_regular_file()) continue;
    rels.push_back(fs::relative(it->path(), src_root).generic_string());
  }
  std::sort(rels.begin(), rels.end());

  try {
    for (const std::string& rel : rels) {
      std::string bytes = read_file(src_root / rel);
      if (!matches_any(include_globs, rel)) {
        write_file(stage / rel, bytes);
        continue;
      }
      if (!valid_utf8(bytes)) {
        out.diagnostics.push_back(rel + ": skipped (invalid UTF-8)");
        write_file(stage / rel, bytes);
        manifest::FileManifest fm;
        fm.path = rel;
        fm.pre_mark_sha256 = fm.post_mark_sha256 = sha256_hex(bytes);
        fm.line_count = ast::count_lines(bytes);
        fm.budget = params.sparsity_k > 0
                        ? fm.line_count / params.sparsity_k : 0;
        rm.files.push_back(std::move(fm));
        continue;
      }
      MarkedFile marked = mark_file(bytes, rel, oracle, params, seed);
      for (auto& d : marked.diagnostics) {
        out.diagnostics.push_back(std::move(d));
      }
      write_file(stage / rel, marked.bytes);
      rm.files.push_back(std::move(marked.file_manifest));
    }
  } catch (...) {
    fs::remove_all(stage);
    throw;
  }

  fs::remove_all(out_root);
  fs::rename(stage, out_root);
  return out;
}

}  // namespace tracemark::marker
