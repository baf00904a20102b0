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
#include "normlab/bitbuf.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace normlab {

namespace {
constexpr std::uint8_t kMagic[6] = {'N', 'B', 'I', 'T', 'S', 0x01};
constexpr std::size_t kHeaderSize = 14;
}  // namespace

void BitBuffer::clear() {
  bytes_.clear();
  len_ = 0;
}

void BitBuffer::reserve_bits(std::uint64_t nbits) {
  bytes_.reserve((nbits + 7) / 8);
}

void BitBuffer::push_back(int bit) {
  if ((len_ & 7) == 0) {
    bytes_.push_back(static_cast<std::uint8_t>(bit << 7));
  } else if (bit) {
    bytes_[len_ >> 3] |= static_cast<std::uint8_t>(0x80u >> (len_ & 7));
  }
  ++len_;
}

void BitBuffer::append_bits(const std::uint8_t* src, std::uint64_t src_bit_off,
                            std::uint64_t count) {
  // align the destination to a byte boundary first
  while (count > 0 && (len_ & 7) != 0) {
    push_back((src[src_bit_off >> 3] >> (7 - (src_bit_off & 7))) & 1);
    ++src_bit_off;
    --count;
  }
  const std::uint64_t whole = count / 8;
  if (whole > 0) {
    const std::uint64_t start = bytes_.size();
    bytes_.resize(start + whole);
    const std::uint8_t* p = src + (src_bit_off >> 3);
    const unsigned shift = static_cast<unsigned>(src_bit_off & 7);
    if (shift == 0) {
      std::memcpy(bytes_.data() + start, p, whole);
    } else {
      for (std::uint64_t i = 0; i < whole; ++i) {
        bytes_[start + i] = static_cast<std::uint8_t>(
            (p[i] << shift) | (p[i + 1] >> (8 - shift)));
      }
    }
    len_ += whole * 8;
    src_bit_off += whole * 8;
    count -= whole * 8;
  }
  while (count > 0) {
    push_back((src[src_bit_off >> 3] >> (7 - (src_bit_off & 7))) & 1);
    ++src_bit_off;
    --count;
  }
}

void BitBuffer::append_word_msb(std::uint64_t value, unsigned nbits) {
  while (nbits > 0) {
    unsigned take = nbits > 8 ? 8 : nbits;
    std::uint8_t chunk =
        static_cast<std::uint8_t>((value >> (nbits - take)) << (8 - take));
    // reuse the bit-blit path; chunk is already MSB-aligned
    append_bits(&chunk, 0, take);
    nbits -= take;
  }
}

void BitBuffer::append_run(int bit, std::uint64_t count) {
  while (count > 0 && (len_ & 7) != 0) {
    push_back(bit);
    --count;
  }
  const std::uint64_t whole = count / 8;
  if (whole > 0) {
    bytes_.insert(bytes_.end(), whole, bit ? 0xFFu : 0x00u);
    len_ += whole * 8;
    count -= whole * 8;
  }
  while (count > 0) {
    push_back(bit);
    --count;
  }
}

std::uint64_t BitBuffer::popcount_prefix(std::uint64_t nbits) const {
  std::uint64_t ones = 0;
  const std::uint64_t whole = nbits / 8;
  std::uint64_t i = 0;
  // 8 bytes at a time
  for (; i + 8 <= whole; i += 8) {
    std::uint64_t w;
    std::memcpy(&w, bytes_.data() + i, 8);
    ones += static_cast<std::uint64_t>(std::popcount(w));
  }
  for (; i < whole; ++i) {
    ones += static_cast<std::uint64_t>(std::popcount(bytes_[i]));
  }
  const unsigned tail = static_cast<unsigned>(nbits & 7);
  if (tail != 0) {
    std::uint8_t mask = static_cast<std::uint8_t>(0xFF00u >> tail);
    ones += static_cast<std::uint64_t>(
        std::popcount(static_cast<std::uint8_t>(bytes_[whole] & mask)));
  }
  return ones;
}

std::vector<std::uint8_t> encode_nbits(const BitBuffer& buffer) {
  std::vector<std::uint8_t> out(kHeaderSize + buffer.bytes().size());
  std::memcpy(out.data(), kMagic, 6);
  const std::uint64_t len = buffer.size();
  for (int i = 0; i < 8; ++i) {
    out[6 + i] = static_cast<std::uint8_t>(len >> (8 * i));
  }
  if (!buffer.bytes().empty()) {
    std::memcpy(out.data() + kHeaderSize, buffer.bytes().data(),
                buffer.bytes().size());
  }
  return out;
}

BitBuffer decode_nbits(const std::uint8_t* data, std::size_t size) {
  if (size < kHeaderSize) {
    throw NbitsError(NbitsErrc::truncated_header,
                     "nbits: stream shorter than the 14-byte header");
  }
  if (std::memcmp(data, kMagic, 5) != 0) {
    throw NbitsError(NbitsErrc::bad_magic, "nbits: bad magic");
  }
  if (data[5] != 0x01) {
    throw NbitsError(NbitsErrc::bad_version,
                     "nbits: unsupported version " + std::to_string(data[5]));
  }
  std::uint64_t len = 0;
  for (int i = 7; i >= 0; --i) {
    len = (len << 8) | data[6 + i];
  }
  const std::uint64_t payload = (len + 7) / 8;
  if (size - kHeaderSize < payload) {
    throw NbitsError(NbitsErrc::truncated_payload,
                     "nbits: payload needs " + std::to_string(payload) +
                         " bytes, got " + std::to_string(size - kHeaderSize));
  }
  const std::uint8_t* body = data + kHeaderSize;
  if ((len & 7) != 0) {
    std::uint8_t pad_mask = static_cast<std::uint8_t>(0xFFu >> (len & 7));
    if ((body[payload - 1] & pad_mask) != 0) {
      throw NbitsError(NbitsErrc::nonzero_padding,
                       "nbits: nonzero pad bits in final byte");
    }
  }
  BitBuffer buf;
  buf.append_bits(body, 0, len);
  return buf;
}

void write_bits(const BitBuffer& buffer, const std::filesystem::path& dest) {
  std::ofstream out(dest, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw NbitsError(NbitsErrc::io_failure,
                     "nbits: cannot open for write: " + dest.string());
  }
  auto encoded = encode_nbits(buffer);
  out.write(reinterpret_cast<const char*>(encoded.data()),
            static_cast<std::streamsize>(encoded.size()));
  if (!out) {
    throw NbitsError(NbitsErrc::io_failure,
                     "nbits: short write: " + dest.string());
  }
}

BitBuffer read_bits(const std::filesystem::path& source) {
  std::ifstream in(source, std::ios::binary);
  if (!in) {
    throw NbitsError(NbitsErrc::io_failure,
                     "nbits: cannot open: " + source.string());
  }
  std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  return decode_nbits(data.data(), data.size());
}

}  // namespace normlab
