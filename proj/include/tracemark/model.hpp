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

#ifndef TRACEMARK_MODEL_HPP
#define TRACEMARK_MODEL_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tracemark/errors.hpp"
#include "tracemark/tokenizer.hpp"

namespace tracemark::model {

using tok::TokenId;

struct AccessMode {
  enum Kind { kFullLogits, kRestrictedTopK };
  Kind kind = kFullLogits;
  int k = 20;                // top-k slots in restricted mode
  bool supports_bias = true;
};

struct ModelHandle {
  std::string model_id;
  std::string tokenizer_id;
  AccessMode access;
};

// A provider answers next-token score queries for a fixed model. Providers
// are shared across threads; implementations must be internally
// thread-safe. Rank logic below is pure and lives outside providers so a
// retry or throttle can never change a logical result.
class LogitsProvider {
 public:
  virtual ~LogitsProvider() = default;

  virtual const ModelHandle& handle() const = 0;
  virtual size_t vocab_size() const = 0;

  // Scores for every vocabulary token given the context. Index = token id.
  virtual std::vector<double> full_logits(
      std::span<const TokenId> context) const = 0;

  // Top-k log-probabilities after adding `bias` to the listed tokens,
  // ordered by descending log-probability. Mirrors completion APIs that
  // expose top_logprobs plus a logit_bias map.
  virtual std::vector<std::pair<TokenId, double>> topk_logprobs(
      std::span<const TokenId> context, int k,
      const std::vector<std::pair<TokenId, double>>& bias) const = 0;
};

// Uniform additive bias used to force a candidate set into the returned
// top-k. Uniformity is what preserves the tokens' relative order.
inline constexpr double kCandidateBias = 90.0;

// Rank of `token` under `scores`: 1 = highest score. Ties break by
// ascending token id, so ranks are a bijection onto [1, vocab size].
int64_t logits_rank(const std::vector<double>& scores, TokenId token);

// The m interchangeable variants for one mark position, ordered by
// ascending oracle rank. Reconstructible bit-for-bit from the same inputs.
struct CandidateSet {
  std::vector<TokenId> tokens;
  int original_index = -1;
  int64_t oracle_rank = 0;  // rank P of the original token

  TokenId original() const { return tokens[original_index]; }
  std::string fingerprint() const;
};

using TokenFilter = std::function<bool(TokenId)>;

// Builds the candidate window [P - m/2, P + m/2) by oracle rank, drops
// tokens rejected by `filter`, and extends outward one rank at a time
// (low side first, then alternating) until exactly m valid tokens are
// collected. Throws PositionIneligibleError when the vocabulary cannot
// supply m valid tokens or P - floor(m/2) < 1.
CandidateSet build_candidate_set(const LogitsProvider& oracle,
                                 std::span<const TokenId> prefix,
                                 TokenId original_token, int m,
                                 const TokenFilter& filter);

// Rank of the published token's loss among the candidates' losses under the
// target model, ascending (1 = lowest loss / highest score). Ties break by
// candidate list position. Uses one full-logits read in full mode; in
// restricted mode requests a uniformly biased top-k and ranks the returned
// log-probabilities (requires m <= k).
int64_t published_loss_rank(const LogitsProvider& target,
                            std::span<const TokenId> prefix,
                            const CandidateSet& candidates,
                            TokenId published_token);

}  // namespace tracemark::model

#endif  // TRACEMARK_MODEL_HPP
