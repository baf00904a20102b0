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
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace normlab {

/// Problems a .nbits stream can have, each its own value so callers can
/// tell them apart.
enum class NbitsErrc {
  bad_magic,
  bad_version,
  truncated_header,
  truncated_payload,
  nonzero_padding,
  io_failure,
};

class NbitsError : public std::runtime_error {
 public:
  NbitsError(NbitsErrc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  NbitsErrc code() const { return code_; }

 private:
  NbitsErrc code_;
};

/// Packed bit sequence, most-significant-bit-first within each byte.
/// Pad bits in the final byte are always zero. Immutable use after
/// construction is safe for concurrent readers.
class BitBuffer {
 public:
  BitBuffer() = default;

  std::uint64_t size() const { return len_; }
  bool empty() const { return len_ == 0; }
  void clear();
  void reserve_bits(std::uint64_t nbits);

  /// Bit at position i (0-based from the start of the stream), 0 or 1.
  int operator[](std::uint64_t i) const {
    return (bytes_[i >> 3] >> (7 - (i & 7))) & 1;
  }

  void push_back(int bit);

  /// Appends `count` bits read from `src` starting at bit offset
  /// `src_bit_off` (MSB-first addressing, same as this buffer's).
  void append_bits(const std::uint8_t* src, std::uint64_t src_bit_off,
                   std::uint64_t count);

  /// Appends the low `nbits` of `value`, most significant of them first.
  void append_word_msb(std::uint64_t value, unsigned nbits);

  /// Appends `count` copies of `bit`.
  void append_run(int bit, std::uint64_t count);

  std::uint64_t popcount() const { return popcount_prefix(len_); }

  /// Ones among the first `nbits` bits.
  std::uint64_t popcount_prefix(std::uint64_t nbits) const;

  const std::vector<std::uint8_t>& bytes() const { return bytes_; }

  bool operator==(const BitBuffer& other) const {
    return len_ == other.len_ && bytes_ == other.bytes_;
  }

 private:
  std::vector<std::uint8_t> bytes_;
  std::uint64_t len_ = 0;
};

// ---------------------------------------------------------------------------
// .nbits file format
//
//   bytes 0..5   ASCII "NBITS" + version byte 0x01
//   bytes 6..13  digit count L, unsigned 64-bit little-endian
//   then         ceil(L/8) payload bytes, bits packed MSB-first, pad zero
// ---------------------------------------------------------------------------

void write_bits(const BitBuffer& buffer, const std::filesystem::path& dest);
BitBuffer read_bits(const std::filesystem::path& source);

/// In-memory codecs behind the file functions; handy for tests and piping.
std::vector<std::uint8_t> encode_nbits(const BitBuffer& buffer);
BitBuffer decode_nbits(const std::uint8_t* data, std::size_t size);

}  // namespace normlab
