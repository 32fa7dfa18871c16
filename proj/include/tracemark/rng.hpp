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

#ifndef TRACEMARK_RNG_HPP
#define TRACEMARK_RNG_HPP

#include <cstdint>
#include <string_view>

#include "tracemark/hash.hpp"

// Deterministic randomness. Seeded outputs must be byte-identical across
// runs and platforms, so everything here is integer-only: SplitMix64 for
// seed expansion and stream derivation, xoshiro256** for draws, Lemire's
// rejection method for bounded integers. <random> distributions are
// implementation-defined and must not be used on any seeded output path.

namespace tracemark {

inline uint64_t splitmix64_next(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(uint64_t seed) {
    uint64_t sm = seed;
    for (auto& word : s_) word = splitmix64_next(sm);
  }

  uint64_t next() {
    const uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform integer in [0, bound), bound >= 1. Unbiased (rejection).
  uint64_t below(uint64_t bound) {
    uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  // Uniform in [0,1) with 53-bit resolution; exact dyadic rational, so
  // comparisons against doubles are platform-independent.
  double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  uint64_t s_[4];
};

// Independent labelled substream. Streams derived from the same seed but
// different labels are unrelated; per-file labels keep one file's draws
// stable when other files are added or removed.
inline Rng derive_rng(uint64_t seed, std::string_view label) {
  uint64_t sm = seed ^ fnv1a64(label);
  return Rng(splitmix64_next(sm));
}

inline Rng derive_rng(uint64_t seed, std::string_view label, uint64_t index) {
  uint64_t sm = seed ^ fnv1a64_u64(index, fnv1a64(label));
  return Rng(splitmix64_next(sm));
}

}  // namespace tracemark

#endif  // TRACEMARK_RNG_HPP
