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
#include <initializer_list>
#include <span>

#include "normlab/bigint.hpp"
#include "normlab/bitbuf.hpp"
#include "normlab/digits.hpp"

namespace normlab {

/// The first n digits of a stream as an ordered 0/1 vector with a cached
/// popcount. Immutable once built; all operations on it are pure.
class PrefixVector {
 public:
  /// left_pad zeros followed by n - left_pad digits drawn from the source.
  static PrefixVector from_source(DigitSource& source, std::uint64_t n,
                                  std::uint64_t left_pad = 0);
  static PrefixVector from_buffer(const BitBuffer& bits, std::uint64_t n,
                                  std::uint64_t left_pad = 0);
  static PrefixVector from_bits(std::span<const int> bits);
  static PrefixVector from_bits(std::initializer_list<int> bits);

  std::uint64_t size() const { return bits_.size(); }
  int bit(std::uint64_t i) const { return bits_[i]; }
  std::uint64_t popcount() const { return popcount_; }
  const BitBuffer& bits() const { return bits_; }

  /// Entrywise complement; this + result is the all-ones vector.
  PrefixVector complement() const;

  bool operator==(const PrefixVector& other) const {
    return bits_ == other.bits_;
  }

 private:
  explicit PrefixVector(BitBuffer bits);

  BitBuffer bits_;
  std::uint64_t popcount_ = 0;
};

/// Explicit non-standard representation: length 2^n - 1, digit i of the
/// prefix repeated 2^(n-1-i) times (blocks in decreasing size order).
struct NsVector {
  std::uint64_t source_length = 0;  // n
  BitBuffer entries;                // 2^n - 1 bits

  std::uint64_t block_size(std::uint64_t i) const {
    return std::uint64_t{1} << (source_length - 1 - i);
  }
  std::uint64_t block_offset(std::uint64_t i) const {
    return (std::uint64_t{1} << source_length) -
           (std::uint64_t{1} << (source_length - i));
  }
  /// Sum of squared entries; entries are 0/1 so this is the popcount.
  std::uint64_t norm_squared() const { return entries.popcount(); }
};

/// Implicit non-standard representation: the exact integer representative
/// and what follows from it, with nothing of size 2^n materialized.
struct NsProfile {
  std::uint64_t n = 0;
  Bigint x_star;           // squared ns norm
  Bigint complement_star;  // 2^n - 1 - x_star
  Bigint ns_length;        // 2^n - 1
};

/// <[x]^(n), 2^(n)> with weights 2^(n-i): the prefix read as an integer.
Bigint integer_representative(const PrefixVector& v);

inline constexpr std::uint64_t kNsMaterializeCap = 20;

/// Explicit ns vector; refuses n beyond the cap (2^n - 1 entries would be
/// materialized) and points the caller at ns_profile instead.
NsVector ns_vector(const PrefixVector& v,
                   std::uint64_t max_n = kNsMaterializeCap);

/// Works for any n.
NsProfile ns_profile(const PrefixVector& v);

/// Squared Euclidean norm of the prefix vector = its popcount.
std::uint64_t norm_squared(const PrefixVector& v);

/// Angle between the prefix vector and the all-ones vector, in radians:
/// arccos(sqrt(popcount/n)). The zero vector has no angle.
double angle_to_ones(const PrefixVector& v);

}  // namespace normlab
