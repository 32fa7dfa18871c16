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

#ifndef TRACEMARK_SIM_HPP
#define TRACEMARK_SIM_HPP

#include <string>
#include <utility>
#include <vector>

#include "tracemark/detector.hpp"
#include "tracemark/marker.hpp"

// Monte Carlo validation harness. Real code-model training is out of reach
// on a workstation, so the statistical machinery is exercised against
// parametric stand-ins: an exact null (uniform ranks), a logit-boost
// memorizer, and a geometric rank family biased toward rank 1.

namespace tracemark::sim {

struct MemorizationModel {
  enum Kind { kNone, kAdditiveLogitBoost, kRankGeometric };
  Kind kind = kNone;
  double boost = 0.0;     // additive: logit bonus on the published token
  double hit_prob = 1.0;  // additive: fraction of marks actually memorized
  double theta = 0.1;     // geometric: success probability per step

  static MemorizationModel none() { return {}; }
  static MemorizationModel additive(double delta, double q = 1.0) {
    return {kAdditiveLogitBoost, delta, q, 0.0};
  }
  static MemorizationModel rank_geometric(double theta) {
    return {kRankGeometric, 0.0, 1.0, theta};
  }
};

struct TrialStats {
  int64_t trials = 0;
  int64_t successes = 0;

  double rate() const {
    return trials ? static_cast<double>(successes) / trials : 0.0;
  }
  // binomial standard error of the observed rate
  double se() const;
};

// Draws n i.i.d. uniform ranks per trial and tests S <= T at the exact
// threshold: the empirical false-detection rate of the pure statistic.
TrialStats simulate_fdr(int64_t n, int m, const std::string& p,
                        int64_t trials, uint64_t seed);

// Detection success rate when ranks follow the memorization model.
TrialStats simulate_dsr(int64_t n, int m, const std::string& p,
                        const MemorizationModel& memo, int64_t trials,
                        uint64_t seed);

struct SweepPoint {
  double x = 0;
  TrialStats stats;
};

struct SweepResult {
  std::string axis;  // "n", "m", "p", or "theta"
  std::vector<SweepPoint> points;

  // columns: point,trials,successes,rate,se
  std::string to_csv() const;
};

SweepResult sweep_dsr(const std::string& axis,
                      const std::vector<double>& grid, int64_t n, int m,
                      const std::string& p, const MemorizationModel& memo,
                      int64_t trials, uint64_t seed);

// A repository held in memory: (relative path, file bytes).
using RepoFixture = std::vector<std::pair<std::string, std::string>>;

struct EndToEndResult {
  manifest::RepoManifest repo_manifest;
  detector::DetectionReport report;
};

// Full pipeline against mock models: marks the fixture with a seeded mock
// oracle, builds a mock target whose scores follow the memorization model
// relative to an independent baseline, and runs detection.
EndToEndResult end_to_end_sim(const RepoFixture& fixture,
                              const MemorizationModel& memo,
                              const std::string& p, uint64_t seed,
                              const marker::MarkParams& params);

}  // namespace tracemark::sim

#endif  // TRACEMARK_SIM_HPP
