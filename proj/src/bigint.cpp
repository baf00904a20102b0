/*
 * Copyright (c) 2026 The normlab authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "normlab/bigint.hpp"

#include <cmath>
#include <stdexcept>

namespace normlab {

std::uint64_t bit_length(const Bigint& z) {
  if (z == 0) return 0;
  return mpz_sizeinbase(z.get_mpz_t(), 2);
}

Bigint pow2(std::uint64_t e) {
  Bigint r;
  mpz_setbit(r.get_mpz_t(), e);
  return r;
}

namespace {

// Newton descent from an upper bound x0 >= floor(sqrt(n)). The iterate
// (x + n/x)/2 is monotonically decreasing until it hits floor(sqrt(n)).
Bigint descend(const Bigint& n, Bigint x) {
  Bigint y = (x + n / x) >> 1;
  while (y < x) {
    x = y;
    y = (x + n / x) >> 1;
  }
  // exactness adjustment: the loop invariant already pins x, but the root
  // must satisfy x^2 <= n < (x+1)^2 unconditionally
  while (x * x > n) --x;
  while ((x + 1) * (x + 1) <= n) ++x;
  return x;
}

}  // namespace

Bigint newton_isqrt(const Bigint& n) {
  if (n < 0) throw std::invalid_argument("newton_isqrt: negative operand");
  if (n < 2) return n;
  // 2^ceil(L/2) > sqrt(n) for an L-bit n
  return descend(n, pow2((bit_length(n) + 1) / 2));
}

Bigint newton_isqrt(const Bigint& n, const Bigint& upper_hint) {
  if (n < 0) throw std::invalid_argument("newton_isqrt: negative operand");
  if (n < 2) return n;
  Bigint x = upper_hint;
  if (x < 1) x = 1;
  if (x * x < n) {
    // hint was not an upper bound after all; fall back to the safe start
    x = pow2((bit_length(n) + 1) / 2);
  }
  return descend(n, x);
}

double ratio_sqrt(const Bigint& num, const Bigint& den) {
  if (den <= 0) throw std::invalid_argument("ratio_sqrt: nonpositive denominator");
  if (num < 0) throw std::invalid_argument("ratio_sqrt: negative numerator");
  if (num == 0) return 0.0;
  signed long en = 0, ed = 0;
  double dn = mpz_get_d_2exp(&en, num.get_mpz_t());  // num = dn * 2^en, dn in [0.5, 1)
  double dd = mpz_get_d_2exp(&ed, den.get_mpz_t());
  long e = en - ed;
  double d = dn / dd;  // in (0.5, 2)
  if (e % 2 != 0) {
    // keep the exponent even so that halving it stays exact
    e -= 1;
    d *= 2.0;
  }
  return std::ldexp(std::sqrt(d), static_cast<int>(e / 2));
}

}  // namespace normlab
