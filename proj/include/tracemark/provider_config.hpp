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

#ifndef TRACEMARK_PROVIDER_CONFIG_HPP
#define TRACEMARK_PROVIDER_CONFIG_HPP

#include <memory>
#include <optional>
#include <string>

#include "tracemark/model.hpp"

namespace tracemark::provider {

struct ProviderConfig {
  enum Kind { kMock, kHttp };
  Kind kind = kMock;

  uint64_t mock_seed = 0;

  std::string endpoint;   // http(s)://host[:port]
  std::string auth_env;   // name of the env var holding the bearer token
  model::AccessMode access;
  std::optional<std::string> model_id;      // else queried from the endpoint
  std::optional<std::string> tokenizer_id;  // else queried from the endpoint
  int timeout_ms = 30000;
  int max_retries = 3;
  int max_inflight = 4;
};

// Accepts either the inline form "mock:<seed>" or a path to a JSON
// configuration file (fields: endpoint, auth_env, mode, k, supports_bias,
// model_id, tokenizer_id, timeout_ms, max_retries, max_inflight). Secrets
// are named by environment variable, never written inline.
ProviderConfig parse_provider_spec(const std::string& spec);

// Overrides the access mode after parsing (the detect --mode flag).
void set_access_mode(ProviderConfig& cfg, const std::string& mode);

std::unique_ptr<model::LogitsProvider> make_provider(const ProviderConfig&);

}  // namespace tracemark::provider

#endif  // TRACEMARK_PROVIDER_CONFIG_HPP
