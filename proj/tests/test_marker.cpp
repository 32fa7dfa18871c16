#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "test_util.hpp"
#include "tracemark/hash.hpp"
#include "tracemark/marker.hpp"
#include "tracemark/mock_model.hpp"

using namespace tracemark;
using namespace tracemark::marker;
namespace fs = std::filesystem;

namespace {

const MarkParams kSmallParams{/*m=*/6, /*sparsity_k=*/100,
                              /*rank_threshold=*/500};

}  // namespace

TEST_CASE("budget: a 250-line file gets at most 2 marks") {
  std::string file = testutil::synth_file(5, 40);
  // 5 functions * ~10 lines + 200 pad = ~251; trim/extend to exactly 250
  int64_t lines = ast::count_lines(file);
  while (lines > 250) {
    file.erase(file.rfind("# pad"));
    lines = ast::count_lines(file);
  }
  while (lines < 250) {
    file += "# tail pad\n";
    ++lines;
  }
  REQUIRE(ast::count_lines(file) == 250);

  model::MockModel oracle(77);
  auto marked = mark_file(file, "file.py", oracle, kSmallParams, 1234);
  CHECK(marked.file_manifest.budget == 2);
  CHECK(marked.file_manifest.marks.size() <= 2);
  CHECK(marked.file_manifest.line_count == 250);
}

TEST_CASE("no local variables: file published unmarked but listed") {
  std::string file = "VALUE = 3\nTABLE = [VALUE] * 4\n";
  for (int i = 0; i < 120; ++i) file += "# filler\n";
  model::MockModel oracle(77);
  auto marked = mark_file(file, "flat.py", oracle, kSmallParams, 5);
  CHECK(marked.bytes == file);
  CHECK(marked.file_manifest.marks.empty());
  CHECK(marked.file_manifest.pre_mark_sha256 ==
        marked.file_manifest.post_mark_sha256);
}

TEST_CASE("files under K lines have no budget and are untouched") {
  std::string file = testutil::synth_file(2, 0);
  REQUIRE(ast::count_lines(file) < 100);
  model::MockModel oracle(77);
  auto marked = mark_file(file, "short.py", oracle, kSmallParams, 5);
  CHECK(marked.bytes == file);
  CHECK(marked.file_manifest.budget == 0);
  CHECK(marked.file_manifest.marks.empty());
}

TEST_CASE("marking is deterministic under a fixed seed") {
  std::string file = testutil::synth_file(6, 30);
  model::MockModel oracle(9001);
  auto a = mark_file(file, "same.py", oracle, kSmallParams, 42);
  auto b = mark_file(file, "same.py", oracle, kSmallParams, 42);
  CHECK(a.bytes == b.bytes);
  CHECK(sha256_hex(a.bytes) == sha256_hex(b.bytes));
  CHECK(a.file_manifest.marks.size() == b.file_manifest.marks.size());
  for (size_t i = 0; i < a.file_manifest.marks.size(); ++i) {
    CHECK(a.file_manifest.marks[i].candidate_fingerprint ==
          b.file_manifest.marks[i].candidate_fingerprint);
    CHECK(a.file_manifest.marks[i].published_token.id ==
          b.file_manifest.marks[i].published_token.id);
  }
  auto c = mark_file(file, "same.py", oracle, kSmallParams, 43);
  bool differs = a.bytes != c.bytes;
  (void)differs;  // different seeds usually publish different variants
}

TEST_CASE("marked files still parse and only identifiers changed") {
  std::string file = testutil::synth_file(8, 30);
  model::MockModel oracle(4);
  auto marked = mark_file(file, "parses.py", oracle,
                          MarkParams{100, 100, 500}, 7);
  REQUIRE(!marked.file_manifest.marks.empty());

  auto analysis = ast::extract_local_variables(marked.bytes, "python");
  CHECK(analysis.ok);

  // token streams line up one-for-one
  const auto& vocab = tok::Vocabulary::instance();
  auto ta = vocab.encode(file);
  auto tb = vocab.encode(marked.bytes);
  REQUIRE(ta.size() == tb.size());
  int64_t diffs = 0;
  for (size_t i = 0; i < ta.size(); ++i) diffs += ta[i].id != tb[i].id ? 1 : 0;
  int64_t renamed_occurrences = 0;
  for (const auto& rec : marked.file_manifest.marks) {
    if (rec.published_token.id != rec.original_token.id) {
      renamed_occurrences += rec.occurrences;
    }
  }
  CHECK(diffs == renamed_occurrences);
}

TEST_CASE("mark records are ascending and carry valid spans") {
  std::string file = testutil::synth_file(8, 30);
  model::MockModel oracle(12);
  auto marked = mark_file(file, "spans.py", oracle,
                          MarkParams{20, 100, 400}, 99);
  REQUIRE(marked.file_manifest.marks.size() >= 2);
  int64_t prev = -1;
  for (const auto& rec : marked.file_manifest.marks) {
    CHECK(rec.token_index > prev);
    prev = rec.token_index;
    CHECK(rec.oracle_rank >= 400);
    std::string_view ident = std::string_view(marked.bytes)
                                 .substr(rec.byte_begin,
                                         rec.byte_end - rec.byte_begin);
    std::string expect = candidate_identifier(rec.published_token.id);
    CHECK(ident == expect);
  }
}

TEST_CASE("repository marking: empty repo") {
  fs::path src = fs::temp_directory_path() / "tm_empty_src";
  fs::path dst = fs::temp_directory_path() / "tm_empty_dst";
  fs::remove_all(src);
  fs::remove_all(dst);
  fs::create_directories(src);
  model::MockModel oracle(5);
  auto repo = mark_repository(src, dst, oracle, kSmallParams, 1);
  CHECK(repo.repo_manifest.file_count() == 0);
  CHECK(repo.repo_manifest.total_marks() == 0);
  fs::remove_all(src);
  fs::remove_all(dst);
}

TEST_CASE("repository marking: manifest round-trips and copies verbatim") {
  fs::path src = fs::temp_directory_path() / "tm_repo_src";
  fs::path dst = fs::temp_directory_path() / "tm_repo_dst";
  fs::remove_all(src);
  fs::remove_all(dst);
  fs::create_directories(src / "pkg");

  auto files = testutil::synth_repo(3, 5, 30);
  for (const auto& [rel, bytes] : files) {
    fs::create_directories((src / rel).parent_path());
    std::ofstream(src / rel, std::ios::binary) << bytes;
  }
  std::ofstream(src / "README.md", std::ios::binary) << "# not python\n";
  std::ofstream(src / "pkg" / "broken.py", std::ios::binary)
      << "def broken(:\n";

  model::MockModel oracle(31337);
  MarkParams params{6, 100, 500};
  auto repo = mark_repository(src, dst, oracle, params, 2024);

  // README copied verbatim, not listed; broken.py listed unmarked
  CHECK(fs::exists(dst / "README.md"));
  bool saw_broken = false;
  for (const auto& f : repo.repo_manifest.files) {
    if (f.path == "pkg/broken.py") {
      saw_broken = true;
      CHECK(f.marks.empty());
    }
    CHECK(f.path != "README.md");
  }
  CHECK(saw_broken);
  CHECK(repo.repo_manifest.file_count() == 4);  // 3 synthetic + broken

  // marked bytes on disk hash to the manifest digests
  for (const auto& f : repo.repo_manifest.files) {
    std::ifstream in(dst / f.path, std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
    CHECK(sha256_hex(bytes) == f.post_mark_sha256);
  }

  // JSON round trip
  auto text = manifest::to_json(repo.repo_manifest);
  auto back = manifest::from_json(text);
  CHECK(manifest::to_json(back) == text);
  CHECK(back.total_marks() == repo.repo_manifest.total_marks());

  // private save: owner-only permissions
  fs::path mpath = fs::temp_directory_path() / "tm_manifest.json";
  manifest::save_private(repo.repo_manifest, mpath);
  auto perms = fs::status(mpath).permissions();
  CHECK((perms & fs::perms::group_read) == fs::perms::none);
  CHECK((perms & fs::perms::others_read) == fs::perms::none);
  auto loaded = manifest::load(mpath);
  CHECK(manifest::to_json(loaded) == text);

  // rerun with the same seed: byte-identical manifest
  fs::path dst2 = fs::temp_directory_path() / "tm_repo_dst2";
  fs::remove_all(dst2);
  auto repo2 = mark_repository(src, dst2, oracle, params, 2024);
  CHECK(manifest::to_json(repo2.repo_manifest) == text);

  // refuse to clobber a non-empty output
  CHECK_THROWS_AS(mark_repository(src, dst, oracle, params, 1), ConfigError);

  fs::remove_all(src);
  fs::remove_all(dst);
  fs::remove_all(dst2);
  fs::remove(mpath);
}

TEST_CASE("golden seeded mark run") {
  // Frozen output of one seeded mark_file run; any change to the tokenizer,
  // vocabulary, rng stream layout, or walk order shows up here.
  std::string file = testutil::synth_file(3, 31);
  REQUIRE(ast::count_lines(file) == 124);
  model::MockModel oracle(1);
  auto marked = mark_file(file, "golden.py", oracle, kSmallParams, 1);
  REQUIRE(marked.file_manifest.marks.size() == 1);
  const auto& rec = marked.file_manifest.marks[0];
  CAPTURE(sha256_hex(marked.bytes));
  CAPTURE(rec.token_index);
  CAPTURE(rec.original_token.text);
  CAPTURE(rec.published_token.text);
  CHECK(sha256_hex(marked.bytes) ==
        "ee1c7224fc1f2fcff9b51222f5eb25ec7b2cb017c3067af865e1b5068cbd82d4");
  CHECK(rec.candidate_fingerprint ==
        "1db676a0c0221e9576b336a25a4e59c66c905221573d50a5d6e6731d8fc39271");
}
