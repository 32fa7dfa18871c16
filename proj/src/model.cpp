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

#include "tracemark/model.hpp"

#include <algorithm>
#include <unordered_map>

#include "tracemark/hash.hpp"

namespace tracemark::model {

int64_t logits_rank(const std::vector<double>& scores, TokenId token) {
  if (token < 0 || static_cast<size_t>(token) >= scores.size()) {
    throw ArgumentError("logits_rank: token id " + std::to_string(token) +
                        " outside vocabulary of size " +
                        std::to_string(scores.size()));
  }
  const double s = scores[static_cast<size_t>(token)];
  int64_t rank = 1;
  for (size_t i = 0; i < scores.size(); ++i) {
    if (scores[i] > s) {
      ++rank;
    } else if (scores[i] == s && static_cast<TokenId>(i) < token) {
      ++rank;
    }
  }
  return rank;
}

std::string CandidateSet::fingerprint() const {
  Sha256 h;
  h.update("cset-v1");
  auto feed_u64 = [&h](uint64_t v) {
    unsigned char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
    h.update(buf, 8);
  };
  feed_u64(static_cast<uint64_t>(tokens.size()));
  feed_u64(static_cast<uint64_t>(oracle_rank));
  feed_u64(static_cast<uint64_t>(original_index));
  for (TokenId t : tokens) feed_u64(static_cast<uint64_t>(t));
  auto d = h.digest();
  return to_hex(d.data(), d.size());
}

namespace {

// Strict total order on tokens for a score vector: higher score first,
// token id breaks ties. Rank r corresponds to position r-1.
struct RankOrder {
  const std::vector<double>& scores;
  bool operator()(TokenId a, TokenId b) const {
    double sa = scores[static_cast<size_t>(a)];
    double sb = scores[static_cast<size_t>(b)];
    if (sa != sb) return sa > sb;
    return a < b;
  }
};

}  // namespace

CandidateSet build_candidate_set(const LogitsProvider& oracle,
                                 std::span<const TokenId> prefix,
                                 TokenId original_token, int m,
                                 const TokenFilter& filter) {
  if (m < 2) throw ArgumentError("build_candidate_set: m must be >= 2");

  const std::vector<double> scores = oracle.full_logits(prefix);
  const int64_t vocab = static_cast<int64_t>(scores.size());
  if (vocab < m) {
    throw PositionIneligibleError(
        "candidate set: vocabulary smaller than m");
  }

  const int64_t p_rank = logits_rank(scores, original_token);
  const int64_t half_low = m / 2;
  if (p_rank - half_low < 1) {
    throw PositionIneligibleError(
        "candidate set: original rank " + std::to_string(p_rank) +
        " too close to the top for window of " + std::to_string(m));
  }

  // Rank order is only needed in a window around P. Partition out the slice
  // [slice_lo, slice_hi] with nth_element (RankOrder is a strict total
  // order, so the slice is unique) and sort just that part; fall back to
  // sorting everything if the extension crawls past the slice.
  std::vector<TokenId> by_rank(static_cast<size_t>(vocab));
  for (int64_t i = 0; i < vocab; ++i) by_rank[i] = static_cast<TokenId>(i);
  const RankOrder order{scores};

  int64_t slice_lo = std::max<int64_t>(1, p_rank - 3 * m - 8);
  int64_t slice_hi = std::min<int64_t>(vocab, p_rank + 3 * m + 8);
  bool fully_sorted = false;
  if (slice_hi - slice_lo + 1 >= vocab / 2) {
    std::sort(by_rank.begin(), by_rank.end(), order);
    fully_sorted = true;
    slice_lo = 1;
    slice_hi = vocab;
  } else {
    auto begin = by_rank.begin();
    std::nth_element(begin, begin + (slice_lo - 1), by_rank.end(), order);
    std::nth_element(begin + (slice_lo - 1), begin + (slice_hi - 1),
                     by_rank.end(), order);
    std::sort(begin + (slice_lo - 1), begin + slice_hi, order);
  }

  auto token_at_rank = [&](int64_t r) {
    if (r < slice_lo || r > slice_hi) {
      if (!fully_sorted) {
        std::sort(by_rank.begin(), by_rank.end(), order);
        fully_sorted = true;
        slice_lo = 1;
        slice_hi = vocab;
      }
    }
    return by_rank[static_cast<size_t>(r - 1)];
  };

  // Base window [P - floor(m/2), P + ceil(m/2) - 1], always m ranks wide.
  const int64_t lo = p_rank - half_low;
  const int64_t hi = lo + m - 1;

  struct Picked {
    int64_t rank;
    TokenId token;
  };
  std::vector<Picked> picked;
  picked.reserve(static_cast<size_t>(m));
  for (int64_t r = std::max<int64_t>(1, lo); r <= std::min(hi, vocab); ++r) {
    TokenId t = token_at_rank(r);
    if (t == original_token || filter(t)) picked.push_back({r, t});
  }

  // Outward extension, one rank per probe, low side first.
  int64_t next_lo = lo - 1;
  int64_t next_hi = hi + 1;
  bool low_turn = true;
  while (static_cast<int>(picked.size()) < m) {
    bool low_ok = next_lo >= 1;
    bool high_ok = next_hi <= vocab;
    if (!low_ok && !high_ok) {
      throw PositionIneligibleError(
          "candidate set: fewer than m valid tokens in the vocabulary");
    }
    int64_t r;
    if ((low_turn && low_ok) || !high_ok) {
      r = next_lo--;
    } else {
      r = next_hi++;
    }
    low_turn = !low_turn;
    TokenId t = token_at_rank(r);
    if (filter(t)) picked.push_back({r, t});
  }

  std::sort(picked.begin(), picked.end(),
            [](const Picked& a, const Picked& b) { return a.rank < b.rank; });

  CandidateSet set;
  set.oracle_rank = p_rank;
  set.tokens.reserve(picked.size());
  for (size_t i = 0; i < picked.size(); ++i) {
    set.tokens.push_back(picked[i].token);
    if (picked[i].rank == p_rank) set.original_index = static_cast<int>(i);
  }
  if (set.original_index < 0 ||
      set.tokens[set.original_index] != original_token) {
    throw InternalError("candidate set lost the original token");
  }
  return set;
}

namespace {

int64_t rank_among(const std::vector<double>& values, size_t published_index) {
  const double pv = values[published_index];
  int64_t rank = 1;
  for (size_t i = 0; i < values.size(); ++i) {
    if (values[i] > pv || (values[i] == pv && i < published_index)) ++rank;
  }
  return rank;
}

}  // namespace

int64_t published_loss_rank(const LogitsProvider& target,
                            std::span<const TokenId> prefix,
                            const CandidateSet& candidates,
                            TokenId published_token) {
  const int m = static_cast<int>(candidates.tokens.size());
  size_t published_index = m;
  for (int i = 0; i < m; ++i) {
    if (candidates.tokens[i] == published_token) {
      published_index = static_cast<size_t>(i);
      break;
    }
  }
  if (published_index == static_cast<size_t>(m)) {
    throw ArgumentError(
        "published_loss_rank: published token not in the candidate set");
  }

  const AccessMode& access = target.handle().access;
  std::vector<double> values(static_cast<size_t>(m));

  if (access.kind == AccessMode::kFullLogits) {
    const std::vector<double> scores = target.full_logits(prefix);
    for (int i = 0; i < m; ++i) {
      TokenId t = candidates.tokens[i];
      if (t < 0 || static_cast<size_t>(t) >= scores.size()) {
        throw ArgumentError("published_loss_rank: candidate outside vocab");
      }
      values[static_cast<size_t>(i)] = scores[static_cast<size_t>(t)];
    }
  } else {
    if (!access.supports_bias) {
      throw ConfigError(
          "restricted access without logit bias cannot rank candidates");
    }
    if (m > access.k) {
      throw ConfigError("restricted access: m=" + std::to_string(m) +
                        " exceeds provider top-k limit k=" +
                        std::to_string(access.k));
    }
    std::vector<std::pair<TokenId, double>> bias;
    bias.reserve(static_cast<size_t>(m));
    for (TokenId t : candidates.tokens) bias.emplace_back(t, kCandidateBias);
    auto top = target.topk_logprobs(prefix, access.k, bias);

    std::unordered_map<TokenId, double> returned;
    returned.reserve(top.size() * 2);
    for (const auto& [t, lp] : top) returned.emplace(t, lp);
    for (int i = 0; i < m; ++i) {
      auto it = returned.find(candidates.tokens[i]);
      if (it == returned.end()) {
        throw ProviderContractError(
            "provider dropped a biased candidate from top-k; cannot rank "
            "this position");
      }
      values[static_cast<size_t>(i)] = it->second;
    }
  }
  return rank_among(values, published_index);
}

}  // namespace tracemark::model
