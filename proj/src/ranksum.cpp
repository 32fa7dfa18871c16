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

#include "tracemark/ranksum.hpp"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <string>

namespace tracemark::nulldist {

namespace {

mpz_class pow_int(int64_t base, int64_t exp) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base),
                static_cast<unsigned long>(exp));
  return r;
}

size_t max_bytes_budget() {
  if (const char* env = std::getenv("TRACEMARK_NULLDIST_MAX_MB")) {
    long mb = std::atol(env);
    if (mb > 0) return static_cast<size_t>(mb) * 1024 * 1024;
  }
  return size_t(1536) * 1024 * 1024;
}

// Kronecker substitution: pack coefficients (each < 2^(8*slot)) into one
// integer at byte-aligned slots, multiply, slice the product back out.
// Non-negative coefficients mean no borrows, so slices are exact as long as
// every product coefficient fits its slot.
std::vector<mpz_class> kronecker_mul(const std::vector<mpz_class>& a,
                                     const std::vector<mpz_class>& b,
                                     size_t slot) {
  auto pack = [slot](const std::vector<mpz_class>& poly) {
    std::vector<unsigned char> buf(poly.size() * slot + 1, 0);
    for (size_t i = 0; i < poly.size(); ++i) {
      size_t written = 0;
      if (poly[i] != 0) {
        mpz_export(buf.data() + i * slot, &written, -1, 1, 0, 0,
                   poly[i].get_mpz_t());
      }
    }
    mpz_class packed;
    mpz_import(packed.get_mpz_t(), buf.size(), -1, 1, 0, 0, buf.data());
    return packed;
  };

  mpz_class product = pack(a) * pack(b);

  size_t out_len = a.size() + b.size() - 1;
  std::vector<unsigned char> buf(out_len * slot + 16, 0);
  size_t written = 0;
  mpz_export(buf.data(), &written, -1, 1, 0, 0, product.get_mpz_t());

  std::vector<mpz_class> out(out_len);
  for (size_t i = 0; i < out_len; ++i) {
    mpz_import(out[i].get_mpz_t(), slot, -1, 1, 0, 0, buf.data() + i * slot);
  }
  return out;
}

// Slot size in bytes for multiplying polynomials whose coefficient sums are
// sa and sb: every product coefficient is at most sa*sb.
size_t slot_for(const mpz_class& sa, const mpz_class& sb) {
  size_t bits = mpz_sizeinbase(sa.get_mpz_t(), 2) +
                mpz_sizeinbase(sb.get_mpz_t(), 2) + 1;
  return (bits + 7) / 8;
}

std::vector<mpz_class> mul_counts(const std::vector<mpz_class>& a,
                                  const mpz_class& sum_a,
                                  const std::vector<mpz_class>& b,
                                  const mpz_class& sum_b) {
  // Schoolbook is faster below the packing overhead's break-even.
  if (a.size() * b.size() <= 4096) {
    std::vector<mpz_class> out(a.size() + b.size() - 1, mpz_class(0));
    for (size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0) continue;
      for (size_t j = 0; j < b.size(); ++j) {
        out[i + j] += a[i] * b[j];
      }
    }
    return out;
  }
  return kronecker_mul(a, b, slot_for(sum_a, sum_b));
}

}  // namespace

mpz_class RankSumDistribution::total() const { return pow_int(m, n); }

const mpz_class& RankSumDistribution::count_at(int64_t sum) const {
  static const mpz_class zero(0);
  if (sum < min_sum() || sum > max_sum()) return zero;
  return counts[static_cast<size_t>(sum - min_sum())];
}

RankSumDistribution rank_sum_pdf(int64_t n, int64_t m) {
  if (n < 1) throw ArgumentError("rank_sum_pdf: n must be >= 1");
  if (m < 2) throw ArgumentError("rank_sum_pdf: m must be >= 2");

  // Result footprint: n*(m-1)+1 coefficients of up to n*log2(m) bits,
  // roughly tripled for the packing workspace and the cumulative table.
  const double bits_per_coeff = static_cast<double>(n) *
      static_cast<double>(mpz_sizeinbase(mpz_class(m).get_mpz_t(), 2));
  const double support = static_cast<double>(n) * (m - 1) + 1;
  const double estimate = support * (bits_per_coeff / 8 + 24) * 3;
  if (estimate > static_cast<double>(max_bytes_budget())) {
    throw ResourceError(
        "rank_sum_pdf: exact distribution for n=" + std::to_string(n) +
        ", m=" + std::to_string(m) + " needs about " +
        std::to_string(static_cast<long long>(estimate / (1024 * 1024))) +
        " MB of exact coefficients; raise TRACEMARK_NULLDIST_MAX_MB if the "
        "machine can take it");
  }

  // Work with (1 + x + ... + x^(m-1))^n; shifting by x^n maps index k to
  // sum s = n + k. Square-and-multiply keeps it to O(log n) convolutions.
  std::vector<mpz_class> base(static_cast<size_t>(m), mpz_class(1));
  mpz_class base_sum = m;

  std::vector<mpz_class> result{mpz_class(1)};
  mpz_class result_sum = 1;

  uint64_t e = static_cast<uint64_t>(n);
  while (e > 0) {
    if (e & 1) {
      result = mul_counts(result, result_sum, base, base_sum);
      result_sum *= base_sum;
    }
    e >>= 1;
    if (e > 0) {
      base = mul_counts(base, base_sum, base, base_sum);
      base_sum *= base_sum;
    }
  }

  RankSumDistribution dist;
  dist.n = n;
  dist.m = m;
  dist.counts = std::move(result);
  return dist;
}

BigRat cdf(const RankSumDistribution& dist, int64_t t) {
  mpz_class den = dist.total();
  if (t < dist.min_sum()) return BigRat(mpz_class(0), den);
  if (t >= dist.max_sum()) return BigRat(den, den);
  mpz_class cum(0);
  for (int64_t s = dist.min_sum(); s <= t; ++s) cum += dist.count_at(s);
  return BigRat(std::move(cum), std::move(den));
}

Threshold threshold(const RankSumDistribution& dist, const BigRat& p) {
  if (p.num <= 0 || p.num >= p.den) {
    throw ArgumentError("threshold: p must lie strictly in (0,1)");
  }
  mpz_class total = dist.total();
  // cum/total <= p  <=>  cum * p.den <= p.num * total, all exact.
  mpz_class limit = p.num * total;

  mpz_class cum(0);
  std::optional<int64_t> best;
  mpz_class best_cum(0);
  for (int64_t s = dist.min_sum(); s <= dist.max_sum(); ++s) {
    cum += dist.count_at(s);
    if (cum * p.den <= limit) {
      best = s;
      best_cum = cum;
    } else {
      break;  // the CDF is non-decreasing
    }
  }

  Threshold th;
  th.fdr_bound = p;
  if (best) {
    th.value = *best;
    th.cdf_at_value = BigRat(best_cum, total);
  } else {
    th.cdf_at_value = BigRat(dist.count_at(dist.min_sum()), total);
  }
  return th;
}

Threshold threshold(int64_t n, int64_t m, const BigRat& p) {
  return threshold(rank_sum_pdf(n, m), p);
}

BigRat pvalue(const RankSumDistribution& dist, int64_t s) {
  if (s < dist.min_sum() || s > dist.max_sum()) {
    throw ArgumentError("pvalue: statistic " + std::to_string(s) +
                        " outside support [" + std::to_string(dist.min_sum()) +
                        ", " + std::to_string(dist.max_sum()) + "]");
  }
  return cdf(dist, s);
}

namespace detail {
std::vector<mpz_class> poly_mul(const std::vector<mpz_class>& a,
                                const std::vector<mpz_class>& b) {
  mpz_class sa(0), sb(0);
  for (const auto& c : a) sa += c;
  for (const auto& c : b) sb += c;
  return mul_counts(a, sa, b, sb);
}
}  // namespace detail

}  // namespace tracemark::nulldist
