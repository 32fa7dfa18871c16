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

#ifndef TRACEMARK_MOCK_MODEL_HPP
#define TRACEMARK_MOCK_MODEL_HPP

#include <memory>
#include <span>
#include <unordered_map>
#include <vector>

#include "tracemark/model.hpp"

namespace tracemark::model {

// Deterministic stand-in model. The score of token t in context c is
//
//   FNV1a64( LE64(seed) || LE64(ctx) || LE32(t) ) / 2^64
//
// where ctx = FNV1a64 over the little-endian 32-bit context token ids.
// Stateless and platform-independent by construction; two MockModels with
// different seeds are statistically independent of each other.
class MockModel : public LogitsProvider {
 public:
  explicit MockModel(uint64_t seed,
                     AccessMode access = AccessMode{AccessMode::kFullLogits});

  const ModelHandle& handle() const override { return handle_; }
  size_t vocab_size() const override;

  std::vector<double> full_logits(
      std::span<const TokenId> context) const override;

  std::vector<std::pair<TokenId, double>> topk_logprobs(
      std::span<const TokenId> context, int k,
      const std::vector<std::pair<TokenId, double>>& bias) const override;

  uint64_t seed() const { return seed_; }

  // Score of one token without materializing the whole vocabulary row.
  double score(std::span<const TokenId> context, TokenId token) const;

  static uint64_t context_digest(std::span<const TokenId> context);

 private:
  uint64_t seed_;
  ModelHandle handle_;
};

// A mock target that prefers chosen tokens: adds `boost` to the score of
// `preferred[ctx_digest]`-listed tokens. Used by simulations to model
// memorization at the logits level while inheriting the base model's
// determinism.
class BoostedMockModel : public LogitsProvider {
 public:
  BoostedMockModel(std::shared_ptr<const MockModel> base, double boost);

  // Registers a (context, token) pair to boost. hit=false records the pair
  // as known but unboosted (used for partial-memorization models).
  void prefer(std::span<const TokenId> context, TokenId token, bool hit);

  const ModelHandle& handle() const override { return base_->handle(); }
  size_t vocab_size() const override { return base_->vocab_size(); }

  std::vector<double> full_logits(
      std::span<const TokenId> context) const override;

  std::vector<std::pair<TokenId, double>> topk_logprobs(
      std::span<const TokenId> context, int k,
      const std::vector<std::pair<TokenId, double>>& bias) const override;

 private:
  std::shared_ptr<const MockModel> base_;
  double boost_;
  // context digest -> boosted token (at most one mark per position)
  std::unordered_map<uint64_t, TokenId> preferred_;
};

}  // namespace tracemark::model

#endif  // TRACEMARK_MOCK_MODEL_HPP
