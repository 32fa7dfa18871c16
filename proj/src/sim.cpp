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

#include "tracemark/sim.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <thread>

#include "tracemark/hash.hpp"
#include "tracemark/rng.hpp"

namespace tracemark::sim {

namespace {

// Per-trial derived seeds keep results identical however trials are split
// across threads.
int64_t count_parallel(int64_t trials, const std::function<bool(int64_t)>& one) {
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  if (trials < 256 || workers == 1) {
    int64_t hits = 0;
    for (int64_t t = 0; t < trials; ++t) hits += one(t) ? 1 : 0;
    return hits;
  }
  std::atomic<int64_t> hits{0};
  std::atomic<int64_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      int64_t local = 0;
      for (;;) {
        int64_t t = next.fetch_add(64);
        if (t >= trials) break;
        int64_t hi = std::min(trials, t + 64);
        for (; t < hi; ++t) local += one(t) ? 1 : 0;
      }
      hits += local;
    });
  }
  for (auto& th : pool) th.join();
  return hits.load();
}

int64_t geometric_rank(Rng& rng, double theta, int m) {
  int64_t k = 0;
  while (k < m - 1 && rng.u01() >= theta) ++k;
  return 1 + k;
}

int64_t draw_rank(Rng& rng, const MemorizationModel& memo, int m) {
  switch (memo.kind) {
    case MemorizationModel::kNone:
      return 1 + static_cast<int64_t>(rng.below(static_cast<uint64_t>(m)));
    case MemorizationModel::kRankGeometric:
      return geometric_rank(rng, memo.theta, m);
    case MemorizationModel::kAdditiveLogitBoost: {
      // m candidate scores; the published one (index drawn uniformly) gets
      // the boost with probability hit_prob; rank ties break by index.
      std::vector<double> scores(static_cast<size_t>(m));
      for (auto& s : scores) s = rng.u01();
      size_t pub = static_cast<size_t>(rng.below(static_cast<uint64_t>(m)));
      if (rng.u01() < memo.hit_prob) scores[pub] += memo.boost;
      int64_t rank = 1;
      for (size_t i = 0; i < scores.size(); ++i) {
        if (scores[i] > scores[pub] || (scores[i] == scores[pub] && i < pub)) {
          ++rank;
        }
      }
      return rank;
    }
  }
  return 1;
}

}  // namespace

double TrialStats::se() const {
  if (trials == 0) return 0.0;
  double r = rate();
  return std::sqrt(r * (1.0 - r) / static_cast<double>(trials));
}

TrialStats simulate_fdr(int64_t n, int m, const std::string& p,
                        int64_t trials, uint64_t seed) {
  return simulate_dsr(n, m, p, MemorizationModel::none(), trials, seed);
}

TrialStats simulate_dsr(int64_t n, int m, const std::string& p,
                        const MemorizationModel& memo, int64_t trials,
                        uint64_t seed) {
  if (trials < 1) throw ArgumentError("simulate: trials must be >= 1");
  auto th = nulldist::threshold(n, m, parse_decimal_probability(p));

  TrialStats stats;
  stats.trials = trials;
  if (th.undetectable()) return stats;  // never rejects
  const int64_t t_value = *th.value;

  stats.successes = count_parallel(trials, [&](int64_t trial) {
    Rng rng = derive_rng(seed, "sim-trial", static_cast<uint64_t>(trial));
    int64_t s = 0;
    for (int64_t i = 0; i < n; ++i) s += draw_rank(rng, memo, m);
    return s <= t_value;
  });
  return stats;
}

std::string SweepResult::to_csv() const {
  std::string out = "point,trials,successes,rate,se\n";
  char buf[160];
  for (const auto& pt : points) {
    std::snprintf(buf, sizeof buf, "%.10g,%lld,%lld,%.6f,%.6f\n", pt.x,
                  static_cast<long long>(pt.stats.trials),
                  static_cast<long long>(pt.stats.successes),
                  pt.stats.rate(), pt.stats.se());
    out += buf;
  }
  return out;
}

SweepResult sweep_dsr(const std::string& axis,
                      const std::vector<double>& grid, int64_t n, int m,
                      const std::string& p, const MemorizationModel& memo,
                      int64_t trials, uint64_t seed) {
  SweepResult res;
  res.axis = axis;
  for (double x : grid) {
    int64_t n_i = n;
    int m_i = m;
    std::string p_i = p;
    MemorizationModel memo_i = memo;
    if (axis == "n") {
      n_i = static_cast<int64_t>(x);
    } else if (axis == "m") {
      m_i = static_cast<int>(x);
    } else if (axis == "theta") {
      memo_i.theta = x;
    } else if (axis == "p") {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.10g", x);
      p_i = buf;
    } else {
      throw ArgumentError("sweep axis must be one of n, m, p, theta");
    }
    SweepPoint pt;
    pt.x = x;
    pt.stats = simulate_dsr(n_i, m_i, p_i, memo_i, trials,
                            seed ^ fnv1a64(axis) ^
                                fnv1a64_u64(static_cast<uint64_t>(
                                    std::llround(x * 1e6))));
    res.points.push_back(pt);
  }
  return res;
}

EndToEndResult end_to_end_sim(const RepoFixture& fixture,
                              const MemorizationModel& memo,
                              const std::string& p, uint64_t seed,
                              const marker::MarkParams& params) {
  if (memo.kind == MemorizationModel::kRankGeometric) {
    throw ArgumentError(
        "end_to_end_sim models memorization at the logit level; "
        "rank_geometric only applies to rank-level simulation");
  }

  uint64_t s0 = seed;
  uint64_t oracle_s = splitmix64_next(s0);
  uint64_t target_s = splitmix64_next(s0);
  uint64_t mark_s = splitmix64_next(s0);

  model::MockModel oracle(oracle_s);
  auto target_base = std::make_shared<model::MockModel>(target_s);

  EndToEndResult out;
  manifest::RepoManifest& rm = out.repo_manifest;
  rm.oracle = {oracle.handle().model_id, oracle.handle().tokenizer_id};
  rm.m = params.m;
  rm.sparsity_k = params.sparsity_k;
  rm.rank_threshold_r = params.rank_threshold;
  rm.seed = mark_s;

  std::vector<std::pair<std::string, std::string>> published;
  for (const auto& [path, bytes] : fixture) {
    marker::MarkedFile mf =
        marker::mark_file(bytes, path, oracle, params, mark_s);
    rm.files.push_back(mf.file_manifest);
    published.emplace_back(path, std::move(mf.bytes));
  }

  model::BoostedMockModel target(target_base, memo.boost);
  if (memo.kind == MemorizationModel::kAdditiveLogitBoost) {
    Rng hit_rng = derive_rng(seed, "memorize");
    const auto& vocab = tok::Vocabulary::instance();
    for (size_t f = 0; f < published.size(); ++f) {
      const auto& fm = rm.files[f];
      if (fm.marks.empty()) continue;
      auto tokens = vocab.encode(published[f].second);
      for (const auto& rec : fm.marks) {
        std::vector<tok::TokenId> prefix;
        prefix.reserve(static_cast<size_t>(rec.token_index));
        for (int64_t i = 0; i < rec.token_index; ++i) {
          prefix.push_back(tokens[static_cast<size_t>(i)].id);
        }
        bool hit = hit_rng.u01() < memo.hit_prob;
        target.prefer(prefix, rec.published_token.id, hit);
      }
    }
  }

  detector::FileReader reader =
      [&published](const std::string& rel) -> std::optional<std::string> {
    for (const auto& [path, bytes] : published) {
      if (path == rel) return bytes;
    }
    return std::nullopt;
  };

  const model::LogitsProvider& target_ref =
      (memo.kind == MemorizationModel::kNone)
          ? static_cast<const model::LogitsProvider&>(*target_base)
          : static_cast<const model::LogitsProvider&>(target);
  out.report = detector::detect(reader, rm, target_ref, oracle, p);
  return out;
}

}  // namespace tracemark::sim
