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

#include "tracemark/http_model.hpp"

#include <chrono>
#include <cstdlib>
#include <semaphore>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "tracemark/tokenizer.hpp"

namespace tracemark::model {

using nlohmann::json;

struct HttpModel::Impl {
  provider::ProviderConfig cfg;
  std::string host;  // scheme://host:port
  std::unique_ptr<std::counting_semaphore<256>> slots;

  std::string bearer() const {
    if (cfg.auth_env.empty()) return {};
    const char* v = std::getenv(cfg.auth_env.c_str());
    return v ? v : "";
  }

  json request(const std::string& path, const std::optional<json>& body) const {
    std::string last_error;
    for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
      if (attempt > 0) {
        std::this_thread::sleep_for(
            std::chrono::milliseconds(50 << (attempt - 1)));
      }
      slots->acquire();
      httplib::Client client(host);
      client.set_connection_timeout(0, cfg.timeout_ms * 1000);
      client.set_read_timeout(cfg.timeout_ms / 1000,
                              (cfg.timeout_ms % 1000) * 1000);
      httplib::Headers headers;
      std::string token = bearer();
      if (!token.empty()) {
        headers.emplace("Authorization", "Bearer " + token);
      }
      httplib::Result res =
          body ? client.Post(path, headers, body->dump(), "application/json")
               : client.Get(path, headers);
      slots->release();

      if (!res) {
        last_error = "connection failure (" + to_string(res.error()) + ")";
        continue;  // retryable
      }
      if (res->status >= 500) {
        last_error = "server error " + std::to_string(res->status);
        continue;  // retryable
      }
      if (res->status != 200) {
        throw ProviderContractError("provider returned HTTP " +
                                    std::to_string(res->status) + " for " +
                                    path);
      }
      try {
        return json::parse(res->body);
      } catch (const std::exception& e) {
        throw ProviderContractError(std::string("provider sent invalid JSON: ") +
                                    e.what());
      }
    }
    throw TransportError("provider unreachable after " +
                         std::to_string(cfg.max_retries + 1) + " attempts: " +
                         last_error);
  }
};

HttpModel::HttpModel(const provider::ProviderConfig& cfg)
    : impl_(std::make_unique<Impl>()) {
  impl_->cfg = cfg;
  impl_->host = cfg.endpoint;
  impl_->slots = std::make_unique<std::counting_semaphore<256>>(
      std::max(1, cfg.max_inflight));

  std::string model_id = cfg.model_id.value_or("");
  std::string tokenizer_id = cfg.tokenizer_id.value_or("");
  if (model_id.empty() || tokenizer_id.empty()) {
    json info = impl_->request("/v1/model", std::nullopt);
    if (model_id.empty()) model_id = info.value("model_id", "");
    if (tokenizer_id.empty()) tokenizer_id = info.value("tokenizer_id", "");
  }
  if (model_id.empty() || tokenizer_id.empty()) {
    throw ConfigError("http provider: model_id/tokenizer_id unavailable");
  }
  // Contexts are encoded locally, so the remote model must speak the
  // built-in audit tokenizer.
  const auto& vocab = tok::Vocabulary::instance();
  if (tokenizer_id != vocab.tokenizer_id()) {
    throw ConfigError("http provider: tokenizer_id '" + tokenizer_id +
                      "' does not match the built-in audit tokenizer '" +
                      vocab.tokenizer_id() + "'");
  }
  handle_.model_id = model_id;
  handle_.tokenizer_id = tokenizer_id;
  handle_.access = cfg.access;
}

HttpModel::~HttpModel() = default;

size_t HttpModel::vocab_size() const {
  return tok::Vocabulary::instance().size();
}

std::vector<double> HttpModel::full_logits(
    std::span<const TokenId> context) const {
  json body{{"model", handle_.model_id},
            {"prompt_tokens", std::vector<TokenId>(context.begin(),
                                                   context.end())},
            {"mode", "full"}};
  json res = impl_->request("/v1/scores", body);
  if (!res.contains("logits") || !res["logits"].is_array()) {
    throw ProviderContractError("full mode: response lacks 'logits'");
  }
  std::vector<double> out = res["logits"].get<std::vector<double>>();
  if (out.size() != vocab_size()) {
    throw ProviderContractError(
        "full mode: provider returned " + std::to_string(out.size()) +
        " logits for a vocabulary of " + std::to_string(vocab_size()));
  }
  return out;
}

std::vector<std::pair<TokenId, double>> HttpModel::topk_logprobs(
    std::span<const TokenId> context, int k,
    const std::vector<std::pair<TokenId, double>>& bias) const {
  json bias_j = json::object();
  for (const auto& [t, b] : bias) bias_j[std::to_string(t)] = b;
  json body{{"model", handle_.model_id},
            {"prompt_tokens", std::vector<TokenId>(context.begin(),
                                                   context.end())},
            {"mode", "top_logprobs"},
            {"k", k},
            {"logit_bias", std::move(bias_j)}};
  json res = impl_->request("/v1/scores", body);
  if (!res.contains("top_logprobs") || !res["top_logprobs"].is_array()) {
    throw ProviderContractError("restricted mode: response lacks "
                                "'top_logprobs'");
  }
  std::vector<std::pair<TokenId, double>> out;
  for (const auto& entry : res["top_logprobs"]) {
    out.emplace_back(entry.at("token").get<TokenId>(),
                     entry.at("logprob").get<double>());
  }
  return out;
}

}  // namespace tracemark::model
