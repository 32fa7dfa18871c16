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

#ifndef TRACEMARK_HTTP_MODEL_HPP
#define TRACEMARK_HTTP_MODEL_HPP

#include <memory>
#include <string>

#include "tracemark/model.hpp"
#include "tracemark/provider_config.hpp"

namespace tracemark::model {

// Scores provider backed by an HTTP endpoint (a local inference server or a
// completions-style API). Wire format, one POST per query:
//
//   POST {endpoint}/v1/scores
//   {"model": "...", "prompt_tokens": [ints], "mode": "full"}
//     -> {"logits": [float; vocab_size]}
//
//   POST {endpoint}/v1/scores
//   {"model": "...", "prompt_tokens": [ints], "mode": "top_logprobs",
//    "k": 20, "logit_bias": {"<token id>": 90.0}}
//     -> {"top_logprobs": [{"token": int, "logprob": float}, ...]}  (desc)
//
//   GET {endpoint}/v1/model
//     -> {"model_id": "...", "tokenizer_id": "...", "vocab_size": int}
//
// Bearer auth comes from the environment variable named in the config.
// Connection failures and 5xx responses are retried with exponential
// backoff and end in TransportError; malformed or truncated answers raise
// ProviderContractError immediately. Retries can never change a logical
// result because rank logic lives outside the provider.
class HttpModel : public LogitsProvider {
 public:
  explicit HttpModel(const provider::ProviderConfig& cfg);
  ~HttpModel() override;

  const ModelHandle& handle() const override { return handle_; }
  size_t vocab_size() const override;

  std::vector<double> full_logits(
      std::span<const TokenId> context) const override;

  std::vector<std::pair<TokenId, double>> topk_logprobs(
      std::span<const TokenId> context, int k,
      const std::vector<std::pair<TokenId, double>>& bias) const override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  ModelHandle handle_;
};

}  // namespace tracemark::model

#endif  // TRACEMARK_HTTP_MODEL_HPP
