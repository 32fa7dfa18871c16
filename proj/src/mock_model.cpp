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

#include "tracemark/mock_model.hpp"

#include <algorithm>
#include <cmath>

#include "tracemark/hash.hpp"

namespace tracemark::model {

namespace {

double u64_to_unit(uint64_t h) {
  // h / 2^64, rounded to double. Documented mapping; do not "improve".
  return static_cast<double>(h) * 0x1.0p-64;
}

std::vector<std::pair<TokenId, double>> topk_from_logits(
    std::vector<double> logits, int k,
    const std::vector<std::pair<TokenId, double>>& bias) {
  for (const auto& [t, b] : bias) {
    if (t >= 0 && static_cast<size_t>(t) < logits.size()) {
      logits[static_cast<size_t>(t)] += b;
    }
  }
  // log softmax over the biased row, summed in token-id order.
  double maxv = *std::max_element(logits.begin(), logits.end());
  double sum = 0;
  for (double v : logits) sum += std::exp(v - maxv);
  double log_z = maxv + std::log(sum);

  std::vector<TokenId> order(logits.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<TokenId>(i);
  int kk = std::min<int>(k, static_cast<int>(order.size()));
  std::partial_sort(order.begin(), order.begin() + kk, order.end(),
                    [&](TokenId a, TokenId b) {
                      double sa = logits[static_cast<size_t>(a)];
                      double sb = logits[static_cast<size_t>(b)];
                      if (sa != sb) return sa > sb;
                      return a < b;
                    });
  std::vector<std::pair<TokenId, double>> out;
  out.reserve(static_cast<size_t>(kk));
  for (int i = 0; i < kk; ++i) {
    out.emplace_back(order[static_cast<size_t>(i)],
                     logits[static_cast<size_t>(order[i])] - log_z);
  }
  return out;
}

}  // namespace

MockModel::MockModel(uint64_t seed, AccessMode access) : seed_(seed) {
  handle_.model_id = "mock:" + std::to_string(seed);
  handle_.tokenizer_id = tok::Vocabulary::instance().tokenizer_id();
  handle_.access = access;
}

size_t MockModel::vocab_size() const {
  return tok::Vocabulary::instance().size();
}

uint64_t MockModel::context_digest(std::span<const TokenId> context) {
  uint64_t h = kFnvOffset;
  for (TokenId t : context) h = fnv1a64_u32(static_cast<uint32_t>(t), h);
  return h;
}

double MockModel::score(std::span<const TokenId> context, TokenId token) const {
  uint64_t ctx = context_digest(context);
  uint64_t h = fnv1a64_u64(seed_);
  h = fnv1a64_u64(ctx, h);
  h = fnv1a64_u32(static_cast<uint32_t>(token), h);
  return u64_to_unit(h);
}

std::vector<double> MockModel::full_logits(
    std::span<const TokenId> context) const {
  uint64_t ctx = context_digest(context);
  uint64_t prefix_hash = fnv1a64_u64(ctx, fnv1a64_u64(seed_));
  size_t v = vocab_size();
  std::vector<double> out(v);
  for (size_t t = 0; t < v; ++t) {
    out[t] = u64_to_unit(fnv1a64_u32(static_cast<uint32_t>(t), prefix_hash));
  }
  return out;
}

std::vector<std::pair<TokenId, double>> MockModel::topk_logprobs(
    std::span<const TokenId> context, int k,
    const std::vector<std::pair<TokenId, double>>& bias) const {
  return topk_from_logits(full_logits(context), k, bias);
}

BoostedMockModel::BoostedMockModel(std::shared_ptr<const MockModel> base,
                                   double boost)
    : base_(std::move(base)), boost_(boost) {}

void BoostedMockModel::prefer(std::span<const TokenId> context, TokenId token,
                              bool hit) {
  if (!hit) return;
  preferred_[MockModel::context_digest(context)] = token;
}

std::vector<double> BoostedMockModel::full_logits(
    std::span<const TokenId> context) const {
  std::vector<double> logits = base_->full_logits(context);
  auto it = preferred_.find(MockModel::context_digest(context));
  if (it != preferred_.end()) {
    logits[static_cast<size_t>(it->second)] += boost_;
  }
  return logits;
}

std::vector<std::pair<TokenId, double>> BoostedMockModel::topk_logprobs(
    std::span<const TokenId> context, int k,
    const std::vector<std::pair<TokenId, double>>& bias) const {
  return topk_from_logits(full_logits(context), k, bias);
}

}  // namespace tracemark::model
