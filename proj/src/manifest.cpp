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

#include "tracemark/manifest.hpp"

#include <fstream>

#include <json.hpp>

#include "tracemark/errors.hpp"

namespace tracemark::manifest {

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr const char* kPrivacyBanner =
    "PRIVATE: mark positions and originals; publishing this file defeats "
    "the audit";

ordered_json mark_to_json(const MarkRecord& r) {
  return ordered_json{
      {"token_index", r.token_index},
      {"byte_span", {r.byte_begin, r.byte_end}},
      {"original", {{"id", r.original_token.id}, {"text", r.original_token.text}}},
      {"published", {{"id", r.published_token.id}, {"text", r.published_token.text}}},
      {"m", r.m},
      {"oracle_rank", r.oracle_rank},
      {"occurrences", r.occurrences},
      {"candidate_fingerprint", r.candidate_fingerprint},
  };
}

MarkRecord mark_from_json(const ordered_json& j) {
  MarkRecord r;
  r.token_index = j.at("token_index").get<int64_t>();
  r.byte_begin = j.at("byte_span").at(0).get<uint32_t>();
  r.byte_end = j.at("byte_span").at(1).get<uint32_t>();
  r.original_token.id = j.at("original").at("id").get<tok::TokenId>();
  r.original_token.text = j.at("original").at("text").get<std::string>();
  r.published_token.id = j.at("published").at("id").get<tok::TokenId>();
  r.published_token.text = j.at("published").at("text").get<std::string>();
  r.m = j.at("m").get<int>();
  r.oracle_rank = j.at("oracle_rank").get<int64_t>();
  r.occurrences = j.at("occurrences").get<int64_t>();
  r.candidate_fingerprint = j.at("candidate_fingerprint").get<std::string>();
  return r;
}

}  // namespace

int64_t RepoManifest::total_marks() const {
  int64_t n = 0;
  for (const auto& f : files) n += static_cast<int64_t>(f.marks.size());
  return n;
}

std::string to_json(const RepoManifest& m) {
  ordered_json files = ordered_json::array();
  for (const auto& f : m.files) {
    ordered_json marks = ordered_json::array();
    for (const auto& r : f.marks) marks.push_back(mark_to_json(r));
    files.push_back(ordered_json{
        {"path", f.path},
        {"pre_mark_sha256", f.pre_mark_sha256},
        {"post_mark_sha256", f.post_mark_sha256},
        {"line_count", f.line_count},
        {"budget", f.budget},
        {"marks", std::move(marks)},
    });
  }
  ordered_json j{
      {"schema_version", m.schema_version},
      {"keep_private", kPrivacyBanner},
      {"oracle",
       {{"model_id", m.oracle.model_id},
        {"tokenizer_id", m.oracle.tokenizer_id}}},
      {"params",
       {{"m", m.m}, {"K", m.sparsity_k}, {"R", m.rank_threshold_r}}},
      {"seed", m.seed},
      {"rng_scheme", m.rng_scheme},
      {"file_count", m.file_count()},
      {"total_marks", m.total_marks()},
      {"files", std::move(files)},
  };
  return j.dump(2) + "\n";
}

RepoManifest from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw ArgumentError(std::string("manifest: invalid JSON: ") + e.what());
  }
  RepoManifest m;
  try {
    m.schema_version = j.at("schema_version").get<int>();
    if (m.schema_version != 1) {
      throw ArgumentError("manifest: unsupported schema version " +
                          std::to_string(m.schema_version));
    }
    m.oracle.model_id = j.at("oracle").at("model_id").get<std::string>();
    m.oracle.tokenizer_id =
        j.at("oracle").at("tokenizer_id").get<std::string>();
    m.m = j.at("params").at("m").get<int>();
    m.sparsity_k = j.at("params").at("K").get<int64_t>();
    m.rank_threshold_r = j.at("params").at("R").get<int64_t>();
    m.seed = j.at("seed").get<uint64_t>();
    m.rng_scheme = j.value("rng_scheme", std::string());
    for (const auto& jf : j.at("files")) {
      FileManifest f;
      f.path = jf.at("path").get<std::string>();
      f.pre_mark_sha256 = jf.at("pre_mark_sha256").get<std::string>();
      f.post_mark_sha256 = jf.at("post_mark_sha256").get<std::string>();
      f.line_count = jf.at("line_count").get<int64_t>();
      f.budget = jf.at("budget").get<int64_t>();
      for (const auto& jm : jf.at("marks")) {
        f.marks.push_back(mark_from_json(jm));
      }
      m.files.push_back(std::move(f));
    }
  } catch (const ordered_json::exception& e) {
    throw ArgumentError(std::string("manifest: missing or bad field: ") +
                        e.what());
  }
  return m;
}

void save_private(const RepoManifest& m, const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw ConfigError("manifest: cannot write " + tmp.string());
    }
    out << to_json(m);
  }
  fs::permissions(tmp,
                  fs::perms::owner_read | fs::perms::owner_write,
                  fs::perm_options::replace);
  fs::rename(tmp, path);
}

RepoManifest load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("manifest: cannot read " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return from_json(text);
}

}  // namespace tracemark::manifest
