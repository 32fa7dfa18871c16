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

#ifndef TRACEMARK_BIGRAT_HPP
#define TRACEMARK_BIGRAT_HPP

#include <gmpxx.h>

#include <string>
#include <string_view>

#include "tracemark/errors.hpp"

namespace tracemark {

// Non-negative exact fraction. Deliberately not auto-reduced: probabilities
// out of the rank-sum distribution are reported over the natural denominator
// m^n (e.g. "10/216"), which is how callers expect to read them.
struct BigRat {
  mpz_class num;
  mpz_class den;

  BigRat() : num(0), den(1) {}
  BigRat(mpz_class n, mpz_class d) : num(std::move(n)), den(std::move(d)) {}

  // Exact comparison: a/b vs c/d  <=>  a*d vs c*b (all values non-negative).
  int compare(const BigRat& o) const {
    return cmp(num * o.den, o.num * den);
  }
  bool operator<=(const BigRat& o) const { return compare(o) <= 0; }
  bool operator<(const BigRat& o) const { return compare(o) < 0; }
  bool operator==(const BigRat& o) const { return compare(o) == 0; }

  double to_double() const {
    return mpq_class(num, den).get_d();
  }

  std::string to_string() const {
    return num.get_str() + "/" + den.get_str();
  }
};

// Parses a probability given as a decimal string ("0.05", ".2", "5e-2")
// into an exact fraction over a power of ten. Binary floating point never
// enters the comparison path, so thresholds honour the bound bit-exactly.
BigRat parse_decimal_probability(std::string_view text);

}  // namespace tracemark

#endif  // TRACEMARK_BIGRAT_HPP
