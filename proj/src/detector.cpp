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

#include "tracemark/detector.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "tracemark/hash.hpp"

namespace tracemark::detector {

namespace fs = std::filesystem;
using tok::Token;
using tok::TokenId;
using tok::Vocabulary;

BigRat pvalue(int64_t n, int64_t m, int64_t s) {
  if (n < 1) throw ArgumentError("pvalue: n must be >= 1");
  return nulldist::pvalue(nulldist::rank_sum_pdf(n, m), s);
}

std::string DetectionReport::decision_text() const {
  switch (decision) {
    case Decision::kDetected: return "detected";
    case Decision::kNotDetected: return "not_detected";
    case Decision::kUndetectable: return "undetectable";
  }
  return "undetectable";
}

std::string DetectionReport::to_json() const {
  nlohmann::ordered_json marks_j = nlohmann::ordered_json::array();
  for (const auto& r : marks) {
    marks_j.push_back({{"file", r.file},
                       {"token_index", r.token_index},
                       {"rank", r.rank}});
  }
  nlohmann::ordered_json dropped_j = nlohmann::ordered_json::array();
  for (const auto& d : dropped) {
    dropped_j.push_back({{"file", d.file},
                         {"token_index", d.token_index},
                         {"reason", d.reason}});
  }
  nlohmann::ordered_json j{
      {"schema_version", 1},
      {"n", n},
      {"m", m},
      {"p", p_text},
      {"threshold",
       threshold ? nlohmann::ordered_json(*threshold)
                 : nlohmann::ordered_json(nullptr)},
      {"rank_sum", rank_sum},
      {"decision", decision_text()},
      {"p_value",
       {{"num", p_value_num}, {"den", p_value_den}, {"approx", p_value_approx}}},
      {"note",
       "the decision is binding only at the pre-registered p of this run; "
       "re-running at other p values voids the false-detection bound"},
      {"marks", std::move(marks_j)},
      {"dropped", std::move(dropped_j)},
  };
  return j.dump(2) + "\n";
}

DetectionReport detect(const FileReader& read_published,
                       const manifest::RepoManifest& mf,
                       const model::LogitsProvider& target,
                       const model::LogitsProvider& oracle,
                       const std::string& p_text) {
  const Vocabulary& vocab = Vocabulary::instance();
  const BigRat p = parse_decimal_probability(p_text);

  manifest::OracleDescriptor supplied{oracle.handle().model_id,
                                      oracle.handle().tokenizer_id};
  if (!(supplied == mf.oracle)) {
    throw ArgumentError(
        "oracle mismatch: manifest was built with model_id='" +
        mf.oracle.model_id + "' tokenizer_id='" + mf.oracle.tokenizer_id +
        "', supplied provider is model_id='" + supplied.model_id +
        "' tokenizer_id='" + supplied.tokenizer_id +
        "'; candidate reconstruction is oracle-specific");
  }

  DetectionReport report;
  report.m = mf.m;
  report.p_text = p_text;

  struct PendingMark {
    std::string file;
    int64_t token_index;
    std::vector<TokenId> prefix;
    model::CandidateSet candidates;
    TokenId published;
  };
  std::vector<PendingMark> pending;

  for (const auto& fmf : mf.files) {
    if (fmf.marks.empty()) continue;

    auto drop_file = [&](const std::string& reason) {
      report.dropped.push_back({fmf.path, -1, reason});
    };

    std::optional<std::string> published = read_published(fmf.path);
    if (!published) {
      drop_file("file missing from the published tree");
      continue;
    }
    if (sha256_hex(*published) != fmf.post_mark_sha256) {
      drop_file("content digest mismatch (tampered or rewritten)");
      continue;
    }

    // Reverse every rename (descending position) to recover the pre-mark
    // file; the stored digest confirms the reconstruction byte-for-byte.
    std::string state = *published;
    bool file_ok = true;
    for (auto it = fmf.marks.rbegin(); it != fmf.marks.rend(); ++it) {
      const auto& rec = *it;
      std::vector<Token> tokens = vocab.encode(state);
      if (rec.token_index < 0 ||
          rec.token_index >= static_cast<int64_t>(tokens.size()) ||
          tokens[static_cast<size_t>(rec.token_index)].id !=
              rec.published_token.id) {
        drop_file("published token not found at recorded position " +
                  std::to_string(rec.token_index));
        file_ok = false;
        break;
      }
      std::string published_ident =
          marker::candidate_identifier(rec.published_token.id);
      std::string original_ident =
          marker::candidate_identifier(rec.original_token.id);
      if (published_ident == original_ident) continue;

      py::ScopeAnalysis analysis = py::analyze_python(state);
      if (!analysis.ok) {
        drop_file("published file no longer parses: " + analysis.error);
        file_ok = false;
        break;
      }
      const py::VariableSite* site = nullptr;
      for (const auto& s : analysis.sites) {
        if (s.name != published_ident) continue;
        auto idx = marker::first_occurrence_token_index(tokens, s);
        if (idx && *idx == rec.token_index) {
          site = &s;
          break;
        }
      }
      if (site == nullptr) {
        drop_file("marked variable not recoverable at position " +
                  std::to_string(rec.token_index));
        file_ok = false;
        break;
      }
      state = ast::apply_rename(state, *site, original_ident);
    }
    if (!file_ok) continue;
    if (sha256_hex(state) != fmf.pre_mark_sha256) {
      drop_file("reconstructed original does not match the pre-mark digest");
      continue;
    }

    // Forward replay of the marking walk, reading draws from the manifest.
    for (const auto& rec : fmf.marks) {
      std::string original_ident =
          marker::candidate_identifier(rec.original_token.id);
      std::string published_ident =
          marker::candidate_identifier(rec.published_token.id);

      bool keep = true;
      try {
        marker::WalkStep step =
            marker::build_walk_step(state, rec.token_index, original_ident,
                                    oracle, mf.m, /*min_rank=*/0);
        if (step.candidates.fingerprint() != rec.candidate_fingerprint) {
          report.dropped.push_back(
              {fmf.path, rec.token_index,
               "candidate fingerprint mismatch (oracle drift or corrupt "
               "manifest)"});
          keep = false;
        } else if (std::find(step.candidates.tokens.begin(),
                             step.candidates.tokens.end(),
                             rec.published_token.id) ==
                   step.candidates.tokens.end()) {
          report.dropped.push_back({fmf.path, rec.token_index,
                                    "published token left the candidate set"});
          keep = false;
        } else {
          pending.push_back({fmf.path, rec.token_index, std::move(step.prefix),
                             std::move(step.candidates),
                             rec.published_token.id});
        }
        // Re-apply the published rename to advance the state, whether or
        // not the mark survived.
        if (published_ident != original_ident) {
          state = ast::apply_rename(state, step.site, published_ident);
        }
      } catch (const PositionIneligibleError& e) {
        report.dropped.push_back({fmf.path, rec.token_index, e.what()});
        keep = false;
        // advance the state without a candidate set
        py::ScopeAnalysis analysis = py::analyze_python(state);
        std::vector<Token> tokens = vocab.encode(state);
        for (const auto& s : analysis.sites) {
          if (s.name != original_ident) continue;
          auto idx = marker::first_occurrence_token_index(tokens, s);
          if (idx && *idx == rec.token_index) {
            if (published_ident != original_ident) {
              state = ast::apply_rename(state, s, published_ident);
            }
            break;
          }
        }
      }
      (void)keep;
    }
  }

  report.n = static_cast<int64_t>(pending.size());
  if (report.n == 0) {
    report.decision = Decision::kUndetectable;
    report.p_value_num = "0";
    report.p_value_den = "1";
    return report;
  }

  auto dist = nulldist::rank_sum_pdf(report.n, report.m);
  auto th = nulldist::threshold(dist, p);
  report.threshold = th.value;

  int64_t sum = 0;
  for (const auto& pm : pending) {
    int64_t rank =
        model::published_loss_rank(target, pm.prefix, pm.candidates,
                                   pm.published);
    sum += rank;
    report.marks.push_back({pm.file, pm.token_index, rank});
  }
  report.rank_sum = sum;

  BigRat pv = nulldist::pvalue(dist, sum);
  report.p_value_num = pv.num.get_str();
  report.p_value_den = pv.den.get_str();
  report.p_value_approx = pv.to_double();

  if (th.undetectable()) {
    report.decision = Decision::kUndetectable;
  } else {
    report.decision = sum <= *th.value ? Decision::kDetected
                                       : Decision::kNotDetected;
  }
  return report;
}

DetectionReport detect(const fs::path& published_root,
                       const manifest::RepoManifest& mf,
                       const model::LogitsProvider& target,
                       const model::LogitsProvider& oracle,
                       const std::string& p_text) {
  FileReader reader = [&](const std::string& rel) -> std::optional<std::string> {
    std::ifstream in(published_root / rel, std::ios::binary);
    if (!in) return std::nullopt;
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
  };
  return detect(reader, mf, target, oracle, p_text);
}

}  // namespace tracemark::detector
