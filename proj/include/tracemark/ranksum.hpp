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

#ifndef TRACEMARK_RANKSUM_HPP
#define TRACEMARK_RANKSUM_HPP

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <vector>

#include "tracemark/bigrat.hpp"

// Null distribution of the detection statistic: S = sum of n i.i.d. ranks,
// each uniform on {1..m}. Everything is exact integer arithmetic; the false
// detection bound is the product's central claim and must never be crossed
// by rounding, so there is no floating-point decision path in this module.

namespace tracemark::nulldist {

struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RankSumDistribution {
  int64_t n = 0;
  int64_t m = 0;
  // counts[s - n] = number of tuples in {1..m}^n with sum s, for
  // s in [n, n*m]. Sum of counts is exactly m^n.
  std::vector<mpz_class> counts;

  int64_t min_sum() const { return n; }
  int64_t max_sum() const { return n * m; }
  mpz_class total() const;
  const mpz_class& count_at(int64_t sum) const;
};

struct Threshold {
  // Largest T with Pr(S <= T) <= p, or empty when even Pr(S <= n) > p
  // (the repository is too small to audit at this p).
  std::optional<int64_t> value;
  BigRat fdr_bound;
  // Exact Pr(S <= T) over denominator m^n when value is set; when the
  // threshold is undetectable this holds Pr(S <= n) for diagnostics.
  BigRat cdf_at_value;

  bool undetectable() const { return !value.has_value(); }
};

// Coefficients of ((x + x^2 + ... + x^m))^n, i.e. unnormalized counts with
// implicit denominator m^n. Binary exponentiation over exact integer
// convolution; large multiplies go through Kronecker substitution so GMP's
// subquadratic integer multiplication does the heavy lifting.
//
// Memory is the practical bound: the result holds n*(m-1)+1 coefficients of
// up to n*log2(m) bits each. The estimated footprint is checked against
// TRACEMARK_NULLDIST_MAX_MB (default 1536) and a ResourceError is thrown
// instead of exhausting the machine.
RankSumDistribution rank_sum_pdf(int64_t n, int64_t m);

// Exact Pr(S <= t); 0 below the support, 1 above it.
BigRat cdf(const RankSumDistribution& dist, int64_t t);

Threshold threshold(const RankSumDistribution& dist, const BigRat& p);
Threshold threshold(int64_t n, int64_t m, const BigRat& p);

// Exact Pr(S <= s) for an observed statistic; s must lie in [n, n*m].
BigRat pvalue(const RankSumDistribution& dist, int64_t s);

namespace detail {
// Exact convolution of non-negative integer polynomials (dense coefficient
// vectors). Exposed for the unit tests' cross-checks.
std::vector<mpz_class> poly_mul(const std::vector<mpz_class>& a,
                                const std::vector<mpz_class>& b);
}  // namespace detail

}  // namespace tracemark::nulldist

#endif  // TRACEMARK_RANKSUM_HPP
