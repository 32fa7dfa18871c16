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

#include "tracemark/provider_config.hpp"

#include <fstream>

#include <json.hpp>

#include "tracemark/http_model.hpp"
#include "tracemark/mock_model.hpp"

namespace tracemark::provider {

using nlohmann::json;

void set_access_mode(ProviderConfig& cfg, const std::string& mode) {
  if (mode == "full") {
    cfg.access.kind = model::AccessMode::kFullLogits;
  } else if (mode == "restricted") {
    cfg.access.kind = model::AccessMode::kRestrictedTopK;
  } else {
    throw ArgumentError("access mode must be 'full' or 'restricted', got '" +
                        mode + "'");
  }
}

ProviderConfig parse_provider_spec(const std::string& spec) {
  ProviderConfig cfg;
  if (spec.rfind("mock:", 0) == 0) {
    cfg.kind = ProviderConfig::kMock;
    std::string seed_text = spec.substr(5);
    try {
      size_t used = 0;
      cfg.mock_seed = std::stoull(seed_text, &used);
      if (used != seed_text.size()) throw std::invalid_argument(seed_text);
    } catch (const std::exception&) {
      throw ArgumentError("mock provider spec must be mock:<u64 seed>, got '" +
                          spec + "'");
    }
    return cfg;
  }

  std::ifstream in(spec, std::ios::binary);
  if (!in) {
    throw ArgumentError("provider spec '" + spec +
                        "' is neither mock:<seed> nor a readable config file");
  }
  json j;
  try {
    j = json::parse(std::string((std::istreambuf_iterator<char>(in)),
                                std::istreambuf_iterator<char>()));
  } catch (const std::exception& e) {
    throw ConfigError("provider config " + spec + ": invalid JSON: " +
                      e.what());
  }

  cfg.kind = ProviderConfig::kHttp;
  cfg.endpoint = j.value("endpoint", "");
  if (cfg.endpoint.empty()) {
    throw ConfigError("provider config " + spec + ": 'endpoint' is required");
  }
  cfg.auth_env = j.value("auth_env", "");
  if (j.contains("mode")) set_access_mode(cfg, j["mode"].get<std::string>());
  cfg.access.k = j.value("k", 20);
  cfg.access.supports_bias = j.value("supports_bias", true);
  if (j.contains("model_id")) cfg.model_id = j["model_id"].get<std::string>();
  if (j.contains("tokenizer_id")) {
    cfg.tokenizer_id = j["tokenizer_id"].get<std::string>();
  }
  cfg.timeout_ms = j.value("timeout_ms", 30000);
  cfg.max_retries = j.value("max_retries", 3);
  cfg.max_inflight = j.value("max_inflight", 4);
  return cfg;
}

std::unique_ptr<model::LogitsProvider> make_provider(
    const ProviderConfig& cfg) {
  if (cfg.kind == ProviderConfig::kMock) {
    return std::make_unique<model::MockModel>(cfg.mock_seed, cfg.access);
  }
  return std::make_unique<model::HttpModel>(cfg);
}

}  // namespace tracemark::provider
