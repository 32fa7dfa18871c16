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

#include "tracemark/bigrat.hpp"

#include <cctype>

namespace tracemark {

BigRat parse_decimal_probability(std::string_view text) {
  std::string digits;
  long frac_digits = 0;
  long exponent = 0;
  size_t i = 0;
  bool seen_digit = false;
  bool seen_dot = false;

  auto fail = [&]() -> BigRat {
    throw ArgumentError("invalid probability '" + std::string(text) +
                        "': expected a decimal in (0,1)");
  };

  if (i < text.size() && text[i] == '+') ++i;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c >= '0' && c <= '9') {
      digits.push_back(c);
      if (seen_dot) ++frac_digits;
      seen_digit = true;
    } else if (c == '.') {
      if (seen_dot) return fail();
      seen_dot = true;
    } else if (c == 'e' || c == 'E') {
      ++i;
      bool neg = false;
      if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        neg = text[i] == '-';
        ++i;
      }
      if (i >= text.size()) return fail();
      long e = 0;
      for (; i < text.size(); ++i) {
        if (!isdigit(static_cast<unsigned char>(text[i]))) return fail();
        e = e * 10 + (text[i] - '0');
        if (e > 10000) return fail();
      }
      exponent = neg ? -e : e;
      break;
    } else {
      return fail();
    }
  }
  if (!seen_digit) return fail();

  BigRat r;
  r.num = mpz_class(digits.empty() ? "0" : digits, 10);
  r.den = 1;
  long shift = frac_digits - exponent;
  if (shift > 0) {
    mpz_ui_pow_ui(r.den.get_mpz_t(), 10, static_cast<unsigned long>(shift));
  } else if (shift < 0) {
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(-shift));
    r.num *= scale;
  }
  if (r.num <= 0 || r.num >= r.den) return fail();
  return r;
}

}  // namespace tracemark
