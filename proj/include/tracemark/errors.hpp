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

#ifndef TRACEMARK_ERRORS_HPP
#define TRACEMARK_ERRORS_HPP

#include <stdexcept>

namespace tracemark {

// Bad inputs from the caller (CLI maps these to exit code 2).
struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Broken or inconsistent configuration (also exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Network/API failure after retries (exit code 3). Distinct from logical
// errors: a retried request must never change a logical result.
struct TransportError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The provider answered but violated its contract (e.g. silently truncated
// a biased top-k response). Surfaced hard rather than guessed around.
struct ProviderContractError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A mark position cannot produce a full candidate set; the caller skips
// the site.
struct PositionIneligibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace tracemark

#endif  // TRACEMARK_ERRORS_HPP
