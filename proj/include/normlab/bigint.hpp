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
#pragma once

#include <cstdint>
#include <gmpxx.h>

namespace normlab {

/// Exact arbitrary-precision integer. GMP supplies the limb arithmetic;
/// everything algorithmic on top of it lives in this project.
using Bigint = mpz_class;

/// Number of binary digits of |z|; 0 for z == 0.
std::uint64_t bit_length(const Bigint& z);

/// 2^e as a Bigint.
Bigint pow2(std::uint64_t e);

/// floor(sqrt(n)) for n >= 0, by integer Newton iteration from an upper
/// bound, with a final exactness adjustment. Never touches floating point.
Bigint newton_isqrt(const Bigint& n);

/// Same, but started from a caller-supplied upper bound on floor(sqrt(n)).
/// Used to reuse the root at a smaller scale when the scale doubles.
Bigint newton_isqrt(const Bigint& n, const Bigint& upper_hint);

/// sqrt(num/den) as a double, num >= 0, den > 0. The exponent is halved in
/// integer form before any conversion so that operands of thousands of bits
/// neither overflow nor lose more than ordinary double rounding.
double ratio_sqrt(const Bigint& num, const Bigint& den);

}  // namespace normlab
