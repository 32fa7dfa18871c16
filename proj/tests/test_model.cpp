#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "tracemark/mock_model.hpp"
#include "tracemark/model.hpp"
#include "tracemark/rng.hpp"
#include "tracemark/tokenizer.hpp"

using namespace tracemark;
using namespace tracemark::model;
using tok::Vocabulary;

namespace {

// Minimal provider with an explicit score table, for hand-set cases.
class TableProvider : public LogitsProvider {
 public:
  TableProvider(std::vector<double> scores, AccessMode access)
      : scores_(std::move(scores)) {
    handle_.model_id = "table";
    handle_.tokenizer_id = "test";
    handle_.access = access;
  }

  const ModelHandle& handle() const override { return handle_; }
  size_t vocab_size() const override { return scores_.size(); }

  std::vector<double> full_logits(std::span<const TokenId>) const override {
    return scores_;
  }

  std::vector<std::pair<TokenId, double>> topk_logprobs(
      std::span<const TokenId>, int k,
      const std::vector<std::pair<TokenId, double>>& bias) const override {
    std::vector<double> s = scores_;
    for (auto [t, b] : bias) s[static_cast<size_t>(t)] += b;
    std::vector<TokenId> order(s.size());
    for (size_t i = 0; i < s.size(); ++i) order[i] = static_cast<TokenId>(i);
    std::sort(order.begin(), order.end(), [&](TokenId a, TokenId b2) {
      if (s[size_t(a)] != s[size_t(b2)]) return s[size_t(a)] > s[size_t(b2)];
      return a < b2;
    });
    std::vector<std::pair<TokenId, double>> out;
    for (int i = 0; i < k && i < static_cast<int>(order.size()); ++i) {
      out.emplace_back(order[size_t(i)], s[size_t(order[size_t(i)])]);
    }
    if (truncate_after >= 0 &&
        static_cast<int>(out.size()) > truncate_after) {
      out.resize(static_cast<size_t>(truncate_after));
    }
    return out;
  }

  int truncate_after = -1;

 private:
  std::vector<double> scores_;
  ModelHandle handle_;
};

TokenFilter accept_all() {
  return [](TokenId) { return true; };
}

}  // namespace

TEST_CASE("vocabulary basics") {
  const auto& v = Vocabulary::instance();
  CHECK(v.size() > 5000);
  CHECK(v.tokenizer_id() == "mocktok-v1/" + std::to_string(v.size()));

  auto idx = v.id_of("idx");
  auto sp_idx = v.id_of(" idx");
  REQUIRE(idx.has_value());
  REQUIRE(sp_idx.has_value());
  CHECK(*idx != *sp_idx);
  CHECK(v.text(*idx) == "idx");
  CHECK(v.text(*sp_idx) == " idx");
  CHECK(!v.id_of("zqxjkw_nonexistent").has_value());
  // single bytes always resolve
  CHECK(v.id_of("(").value() == static_cast<tok::TokenId>('('));
}

TEST_CASE("tokenizer encode covers the input and merges single spaces") {
  const auto& v = Vocabulary::instance();
  std::string text = "def f(alpha):\n    return alpha + 1\n";
  auto toks = v.encode(text);
  // spans partition the input
  uint32_t pos = 0;
  for (const auto& t : toks) {
    CHECK(t.begin == pos);
    CHECK(t.end > t.begin);
    pos = t.end;
  }
  CHECK(pos == text.size());

  // " alpha" after "return" merges; "alpha" after "(" does not
  std::string decoded;
  bool saw_merged = false, saw_plain = false;
  for (const auto& t : toks) {
    std::string_view piece = std::string_view(text).substr(t.begin, t.end - t.begin);
    CHECK(v.text(t.id) == piece);
    if (piece == " alpha") saw_merged = true;
    if (piece == "alpha") saw_plain = true;
    decoded += piece;
  }
  CHECK(decoded == text);
  CHECK(saw_merged);
  CHECK(saw_plain);
}

TEST_CASE("tokenizer falls back to bytes for unknown words") {
  const auto& v = Vocabulary::instance();
  auto toks = v.encode("zzqy9 = 1");
  // "zzqy9" is not a vocabulary word: five byte tokens
  REQUIRE(toks.size() >= 5);
  for (int i = 0; i < 5; ++i) {
    CHECK(toks[size_t(i)].end - toks[size_t(i)].begin == 1);
  }
}

TEST_CASE("logits_rank hand cases") {
  // scores {A:5.0, B:3.0, C:1.0} -> B is rank 2
  std::vector<double> s = {5.0, 3.0, 1.0};
  CHECK(logits_rank(s, 1) == 2);
  CHECK(logits_rank(s, 0) == 1);
  CHECK(logits_rank(s, 2) == 3);

  // tie broken by ascending token id
  std::vector<double> tie = {2.0, 2.0};
  CHECK(logits_rank(tie, 0) == 1);
  CHECK(logits_rank(tie, 1) == 2);

  CHECK_THROWS_AS(logits_rank(s, 7), ArgumentError);
  CHECK_THROWS_AS(logits_rank(s, -1), ArgumentError);
}

TEST_CASE("logits_rank is a bijection even with ties") {
  Rng rng(5);
  std::vector<double> s(60);
  for (auto& x : s) x = static_cast<double>(rng.below(10));  // many ties
  std::set<int64_t> ranks;
  for (size_t t = 0; t < s.size(); ++t) {
    ranks.insert(logits_rank(s, static_cast<TokenId>(t)));
  }
  CHECK(ranks.size() == s.size());
  CHECK(*ranks.begin() == 1);
  CHECK(*ranks.rbegin() == static_cast<int64_t>(s.size()));
}

TEST_CASE("mock model: token at sorted position 500 has rank 500") {
  MockModel oracle(42);
  std::vector<TokenId> ctx = {1, 2, 3};
  auto scores = oracle.full_logits(ctx);
  std::vector<TokenId> order(scores.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<TokenId>(i);
  std::sort(order.begin(), order.end(), [&](TokenId a, TokenId b) {
    if (scores[size_t(a)] != scores[size_t(b)]) {
      return scores[size_t(a)] > scores[size_t(b)];
    }
    return a < b;
  });
  CHECK(logits_rank(scores, order[499]) == 500);
}

TEST_CASE("mock model scores are stable and seed-dependent") {
  MockModel a(1), a2(1), b(2);
  std::vector<TokenId> ctx = {10, 20};
  CHECK(a.score(ctx, 5) == a2.score(ctx, 5));
  CHECK(a.score(ctx, 5) != b.score(ctx, 5));
  std::vector<TokenId> ctx2 = {10, 21};
  CHECK(a.score(ctx, 5) != a.score(ctx2, 5));
  CHECK(a.score(ctx, 5) >= 0.0);
  CHECK(a.score(ctx, 5) < 1.0);
}

TEST_CASE("candidate window: all tokens valid") {
  MockModel oracle(7);
  std::vector<TokenId> ctx = {4, 4, 8};
  auto scores = oracle.full_logits(ctx);
  std::vector<TokenId> order(scores.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<TokenId>(i);
  std::sort(order.begin(), order.end(), [&](TokenId x, TokenId y) {
    if (scores[size_t(x)] != scores[size_t(y)]) {
      return scores[size_t(x)] > scores[size_t(y)];
    }
    return x < y;
  });

  TokenId original = order[499];  // rank 500
  auto set = build_candidate_set(oracle, ctx, original, 100, accept_all());
  REQUIRE(set.tokens.size() == 100);
  CHECK(set.oracle_rank == 500);
  CHECK(set.original_index == 50);
  CHECK(set.original() == original);
  // ranks 450..549 inclusive, in rank order
  for (int i = 0; i < 100; ++i) {
    CHECK(set.tokens[size_t(i)] == order[size_t(449 + i)]);
  }

  auto set2 = build_candidate_set(oracle, ctx, original, 2, accept_all());
  REQUIRE(set2.tokens.size() == 2);
  CHECK(set2.tokens[0] == order[498]);  // rank 499
  CHECK(set2.tokens[1] == original);    // rank 500
  CHECK(set2.original_index == 1);
}

TEST_CASE("candidate window: alternating extension after filtering") {
  MockModel oracle(7);
  std::vector<TokenId> ctx = {4, 4, 8};
  auto scores = oracle.full_logits(ctx);
  std::vector<TokenId> order(scores.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<TokenId>(i);
  std::sort(order.begin(), order.end(), [&](TokenId x, TokenId y) {
    if (scores[size_t(x)] != scores[size_t(y)]) {
      return scores[size_t(x)] > scores[size_t(y)];
    }
    return x < y;
  });
  TokenId original = order[499];  // rank 500

  // m=4, base window ranks 498..501; rank 499 invalid -> probe 497 first
  TokenId bad499 = order[498];
  auto filter1 = [&](TokenId t) { return t != bad499; };
  auto set1 = build_candidate_set(oracle, ctx, original, 4, filter1);
  REQUIRE(set1.tokens.size() == 4);
  CHECK(set1.tokens[0] == order[496]);  // rank 497 (low probe first)
  CHECK(set1.tokens[1] == order[497]);  // rank 498
  CHECK(set1.tokens[2] == original);    // rank 500
  CHECK(set1.tokens[3] == order[500]);  // rank 501

  // 497 also invalid -> extension lands on 502
  TokenId bad497 = order[496];
  auto filter2 = [&](TokenId t) { return t != bad499 && t != bad497; };
  auto set2 = build_candidate_set(oracle, ctx, original, 4, filter2);
  REQUIRE(set2.tokens.size() == 4);
  CHECK(set2.tokens[0] == order[497]);  // 498
  CHECK(set2.tokens[1] == original);    // 500
  CHECK(set2.tokens[2] == order[500]);  // 501
  CHECK(set2.tokens[3] == order[501]);  // 502
}

TEST_CASE("candidate window edge failures") {
  MockModel oracle(7);
  std::vector<TokenId> ctx = {1};
  auto scores = oracle.full_logits(ctx);
  std::vector<TokenId> order(scores.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<TokenId>(i);
  std::sort(order.begin(), order.end(), [&](TokenId x, TokenId y) {
    if (scores[size_t(x)] != scores[size_t(y)]) {
      return scores[size_t(x)] > scores[size_t(y)];
    }
    return x < y;
  });
  // top-ranked token: window floor below rank 1
  CHECK_THROWS_AS(
      build_candidate_set(oracle, ctx, order[0], 100, accept_all()),
      PositionIneligibleError);
  // filter rejecting everything: vocabulary exhausted
  auto reject = [&](TokenId t) { return t == order[499]; };
  CHECK_THROWS_AS(build_candidate_set(oracle, ctx, order[499], 3, reject),
                  PositionIneligibleError);
}

TEST_CASE("candidate reconstruction is bit-identical") {
  MockModel oracle(11);
  std::vector<TokenId> ctx = {9, 9, 9, 2};
  auto scores = oracle.full_logits(ctx);
  std::vector<TokenId> order(scores.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<TokenId>(i);
  std::sort(order.begin(), order.end(), [&](TokenId x, TokenId y) {
    if (scores[size_t(x)] != scores[size_t(y)]) {
      return scores[size_t(x)] > scores[size_t(y)];
    }
    return x < y;
  });
  auto filter = [](TokenId t) { return t % 3 != 0; };
  TokenId original = order[700];
  auto a = build_candidate_set(oracle, ctx, original, 50, filter);
  auto b = build_candidate_set(oracle, ctx, original, 50, filter);
  CHECK(a.tokens == b.tokens);
  CHECK(a.original_index == b.original_index);
  CHECK(a.fingerprint() == b.fingerprint());
  CHECK(a.fingerprint().size() == 64);
}

TEST_CASE("published_loss_rank hand cases") {
  // candidates t0,t1,t2 with target logits {0.1, 0.9, 0.5}
  CandidateSet set;
  set.tokens = {0, 1, 2};
  set.original_index = 0;
  TableProvider target({0.1, 0.9, 0.5}, AccessMode{AccessMode::kFullLogits});
  std::vector<TokenId> ctx;
  CHECK(published_loss_rank(target, ctx, set, 1) == 1);  // highest logit
  CHECK(published_loss_rank(target, ctx, set, 2) == 2);
  CHECK(published_loss_rank(target, ctx, set, 0) == 3);

  // all equal: rank = list position + 1
  TableProvider flat({2.0, 2.0, 2.0}, AccessMode{AccessMode::kFullLogits});
  CHECK(published_loss_rank(flat, ctx, set, 0) == 1);
  CHECK(published_loss_rank(flat, ctx, set, 1) == 2);
  CHECK(published_loss_rank(flat, ctx, set, 2) == 3);

  CHECK_THROWS_AS(published_loss_rank(target, ctx, set, 9), ArgumentError);
}

TEST_CASE("memorizing target always yields rank 1") {
  auto base = std::make_shared<MockModel>(3);
  BoostedMockModel target(base, 10.0);
  std::vector<TokenId> ctx = {5, 6, 7};
  MockModel oracle(4);
  auto set = build_candidate_set(oracle, ctx, 600, 20, accept_all());
  for (TokenId published : set.tokens) {
    BoostedMockModel t2(base, 10.0);
    t2.prefer(ctx, published, true);
    CHECK(published_loss_rank(t2, ctx, set, published) == 1);
  }
}

TEST_CASE("rank order is invariant under a uniform additive bias") {
  Rng rng(123);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> scores(40);
    for (auto& s : scores) {
      s = static_cast<double>(rng.below(1000)) / 64.0;
    }
    CandidateSet set;
    for (TokenId t = 0; t < 12; ++t) set.tokens.push_back(t * 3);
    set.original_index = 4;
    TableProvider base(scores, AccessMode{AccessMode::kFullLogits});
    double c = static_cast<double>(rng.below(50));
    std::vector<double> shifted = scores;
    for (auto& s : shifted) s += c;
    TableProvider moved(shifted, AccessMode{AccessMode::kFullLogits});
    std::vector<TokenId> ctx;
    for (TokenId pub : set.tokens) {
      CHECK(published_loss_rank(base, ctx, set, pub) ==
            published_loss_rank(moved, ctx, set, pub));
    }
  }
}

TEST_CASE("restricted mode agrees with full mode bit-for-bit") {
  for (uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
    MockModel full(seed, AccessMode{AccessMode::kFullLogits});
    MockModel restricted(seed,
                         AccessMode{AccessMode::kRestrictedTopK, 20, true});
    MockModel oracle(seed + 1000);
    std::vector<TokenId> ctx = {static_cast<TokenId>(seed), 17, 129};
    for (int m : {2, 10, 20}) {
      auto set = build_candidate_set(oracle, ctx, 777, m, accept_all());
      for (TokenId pub : set.tokens) {
        CHECK(published_loss_rank(full, ctx, set, pub) ==
              published_loss_rank(restricted, ctx, set, pub));
      }
    }
  }
}

TEST_CASE("restricted mode configuration and contract errors") {
  CandidateSet set;
  for (TokenId t = 0; t < 25; ++t) set.tokens.push_back(t);
  set.original_index = 0;
  std::vector<double> scores(40, 1.0);
  TableProvider target(scores, AccessMode{AccessMode::kRestrictedTopK, 20, true});
  std::vector<TokenId> ctx;
  CHECK_THROWS_AS(published_loss_rank(target, ctx, set, 0), ConfigError);

  CandidateSet small;
  for (TokenId t = 0; t < 10; ++t) small.tokens.push_back(t);
  small.original_index = 0;
  TableProvider trunc(scores, AccessMode{AccessMode::kRestrictedTopK, 20, true});
  trunc.truncate_after = 5;  // provider silently drops entries
  CHECK_THROWS_AS(published_loss_rank(trunc, ctx, small, 0),
                  ProviderContractError);

  TableProvider nobias(scores,
                       AccessMode{AccessMode::kRestrictedTopK, 20, false});
  CHECK_THROWS_AS(published_loss_rank(nobias, ctx, small, 0), ConfigError);
}
