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
#include "normlab/vecrep.hpp"

#include <cmath>
#include <stdexcept>

namespace normlab {

PrefixVector::PrefixVector(BitBuffer bits) : bits_(std::move(bits)) {
  if (bits_.empty()) {
    throw std::invalid_argument("prefix vector: length must be >= 1");
  }
  popcount_ = bits_.popcount();
}

PrefixVector PrefixVector::from_source(DigitSource& source, std::uint64_t n,
                                       std::uint64_t left_pad) {
  if (left_pad > n) {
    throw std::invalid_argument("prefix vector: left_pad exceeds length");
  }
  BitBuffer buf;
  buf.reserve_bits(n);
  buf.append_run(0, left_pad);
  source.emit(buf, n - left_pad);
  return PrefixVector(std::move(buf));
}

PrefixVector PrefixVector::from_buffer(const BitBuffer& bits, std::uint64_t n,
                                       std::uint64_t left_pad) {
  if (left_pad > n) {
    throw std::invalid_argument("prefix vector: left_pad exceeds length");
  }
  const std::uint64_t need = n - left_pad;
  if (bits.size() < need) {
    throw InsufficientDigitsError(need, bits.size());
  }
  BitBuffer buf;
  buf.reserve_bits(n);
  buf.append_run(0, left_pad);
  buf.append_bits(bits.bytes().data(), 0, need);
  return PrefixVector(std::move(buf));
}

PrefixVector PrefixVector::from_bits(std::span<const int> bits) {
  BitBuffer buf;
  buf.reserve_bits(bits.size());
  for (int b : bits) buf.push_back(b ? 1 : 0);
  return PrefixVector(std::move(buf));
}

PrefixVector PrefixVector::from_bits(std::initializer_list<int> bits) {
  return from_bits(std::span<const int>(bits.begin(), bits.size()));
}

PrefixVector PrefixVector::complement() const {
  BitBuffer out;
  const std::uint64_t n = bits_.size();
  out.reserve_bits(n);
  const auto& src = bits_.bytes();
  std::uint64_t whole = n / 8;
  for (std::uint64_t i = 0; i < whole; ++i) {
    out.append_word_msb(static_cast<std::uint8_t>(~src[i]), 8);
  }
  for (std::uint64_t i = whole * 8; i < n; ++i) {
    out.push_back(1 - bits_[i]);
  }
  return PrefixVector(std::move(out));
}

Bigint integer_representative(const PrefixVector& v) {
  const std::uint64_t n = v.size();
  const std::uint64_t nbytes = (n + 7) / 8;
  Bigint x;
  mpz_import(x.get_mpz_t(), nbytes, 1, 1, 0, 0, v.bits().bytes().data());
  // the import reads whole bytes; drop the zero pad bits
  x >>= (nbytes * 8 - n);
  return x;
}

NsVector ns_vector(const PrefixVector& v, std::uint64_t max_n) {
  const std::uint64_t n = v.size();
  if (n > max_n) {
    throw std::invalid_argument(
        "ns_vector: n = " + std::to_string(n) + " exceeds the materialization cap " +
        std::to_string(max_n) + "; use ns_profile for the implicit form");
  }
  NsVector out;
  out.source_length = n;
  out.entries.reserve_bits((std::uint64_t{1} << n) - 1);
  for (std::uint64_t i = 0; i < n; ++i) {
    out.entries.append_run(v.bit(i), std::uint64_t{1} << (n - 1 - i));
  }
  return out;
}

NsProfile ns_profile(const PrefixVector& v) {
  NsProfile p;
  p.n = v.size();
  p.x_star = integer_representative(v);
  p.ns_length = pow2(p.n) - 1;
  p.complement_star = p.ns_length - p.x_star;
  return p;
}

std::uint64_t norm_squared(const PrefixVector& v) { return v.popcount(); }

double angle_to_ones(const PrefixVector& v) {
  if (v.popcount() == 0) {
    throw std::domain_error("angle_to_ones: undefined angle for the zero vector");
  }
  const double ratio =
      static_cast<double>(v.popcount()) / static_cast<double>(v.size());
  return std::acos(std::sqrt(ratio));
}

}  // namespace normlab
