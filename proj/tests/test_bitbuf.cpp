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
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <random>

#include "normlab/bitbuf.hpp"

using namespace normlab;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const char* name) {
  return fs::temp_directory_path() / name;
}

BitBuffer random_buffer(std::mt19937_64& rng, std::uint64_t len) {
  BitBuffer b;
  b.reserve_bits(len);
  for (std::uint64_t i = 0; i < len; ++i) {
    b.push_back(static_cast<int>(rng() & 1));
  }
  return b;
}

}  // namespace

TEST_CASE("push_back and indexing") {
  BitBuffer b;
  const int bits[] = {1, 0, 1, 1, 0, 1, 0, 1, 0, 0, 1};
  for (int x : bits) b.push_back(x);
  REQUIRE(b.size() == 11);
  for (std::uint64_t i = 0; i < b.size(); ++i) {
    CHECK(b[i] == bits[i]);
  }
  CHECK(b.popcount() == 6);
  CHECK(b.popcount_prefix(4) == 3);
  CHECK(b.popcount_prefix(0) == 0);
  // pad bits of the final byte stay zero
  CHECK((b.bytes().back() & 0x1F) == 0);
}

TEST_CASE("append_bits at every offset combination") {
  std::mt19937_64 rng(7);
  const BitBuffer src = random_buffer(rng, 200);
  for (std::uint64_t dst_pre : {0, 1, 7, 8, 13}) {
    for (std::uint64_t off : {0, 1, 5, 8, 9, 63}) {
      for (std::uint64_t count : {0, 1, 7, 8, 9, 64, 100}) {
        BitBuffer out;
        for (std::uint64_t i = 0; i < dst_pre; ++i) out.push_back(1);
        out.append_bits(src.bytes().data(), off, count);
        REQUIRE(out.size() == dst_pre + count);
        for (std::uint64_t i = 0; i < count; ++i) {
          REQUIRE(out[dst_pre + i] == src[off + i]);
        }
      }
    }
  }
}

TEST_CASE("append_word_msb and append_run") {
  BitBuffer b;
  b.append_word_msb(0b1011, 4);
  b.append_word_msb(0, 2);
  b.append_run(1, 3);
  const int expected[] = {1, 0, 1, 1, 0, 0, 1, 1, 1};
  REQUIRE(b.size() == 9);
  for (std::uint64_t i = 0; i < b.size(); ++i) CHECK(b[i] == expected[i]);
  BitBuffer c;
  c.append_word_msb(~0ull, 64);
  CHECK(c.popcount() == 64);
}

TEST_CASE("nbits round-trip is the identity (random lengths up to 1e5)") {
  std::mt19937_64 rng(42);
  const auto path = temp_file("normlab_roundtrip.nbits");
  for (int trial = 0; trial < 24; ++trial) {
    const std::uint64_t len = trial == 0 ? 0 : rng() % 100000;
    const BitBuffer b = random_buffer(rng, len);
    write_bits(b, path);
    const BitBuffer back = read_bits(path);
    REQUIRE(back.size() == b.size());
    REQUIRE(back == b);
  }
  fs::remove(path);
}

TEST_CASE("empty buffer writes a header-only file") {
  const auto path = temp_file("normlab_empty.nbits");
  write_bits(BitBuffer{}, path);
  CHECK(fs::file_size(path) == 14);
  CHECK(read_bits(path).size() == 0);
  fs::remove(path);
}

TEST_CASE("decode rejects malformed streams with distinct errors") {
  BitBuffer b;
  b.append_word_msb(0b1011, 4);
  auto good = encode_nbits(b);

  SUBCASE("bad magic") {
    auto bad = good;
    bad[0] = 'X';
    CHECK_THROWS_WITH_AS(decode_nbits(bad.data(), bad.size()),
                         doctest::Contains("bad magic"), NbitsError);
    try {
      decode_nbits(bad.data(), bad.size());
    } catch (const NbitsError& e) {
      CHECK(e.code() == NbitsErrc::bad_magic);
    }
  }
  SUBCASE("bad version") {
    auto bad = good;
    bad[5] = 0x02;
    try {
      decode_nbits(bad.data(), bad.size());
      FAIL("expected NbitsError");
    } catch (const NbitsError& e) {
      CHECK(e.code() == NbitsErrc::bad_version);
    }
  }
  SUBCASE("truncated header") {
    try {
      decode_nbits(good.data(), 10);
      FAIL("expected NbitsError");
    } catch (const NbitsError& e) {
      CHECK(e.code() == NbitsErrc::truncated_header);
    }
  }
  SUBCASE("truncated payload") {
    BitBuffer big;
    big.append_run(1, 64);
    auto enc = encode_nbits(big);
    try {
      decode_nbits(enc.data(), enc.size() - 3);
      FAIL("expected NbitsError");
    } catch (const NbitsError& e) {
      CHECK(e.code() == NbitsErrc::truncated_payload);
    }
  }
  SUBCASE("nonzero padding") {
    auto bad = good;  // 4 bits -> low 4 bits of the payload byte must be 0
    bad.back() |= 0x01;
    try {
      decode_nbits(bad.data(), bad.size());
      FAIL("expected NbitsError");
    } catch (const NbitsError& e) {
      CHECK(e.code() == NbitsErrc::nonzero_padding);
    }
  }
}

TEST_CASE("header layout is pinned") {
  BitBuffer b;
  for (int i = 0; i < 9; ++i) b.push_back(1);
  auto enc = encode_nbits(b);
  REQUIRE(enc.size() == 14 + 2);
  CHECK(enc[0] == 'N');
  CHECK(enc[1] == 'B');
  CHECK(enc[2] == 'I');
  CHECK(enc[3] == 'T');
  CHECK(enc[4] == 'S');
  CHECK(enc[5] == 0x01);
  CHECK(enc[6] == 9);  // little-endian length
  for (int i = 7; i < 14; ++i) CHECK(enc[i] == 0);
  CHECK(enc[14] == 0xFF);
  CHECK(enc[15] == 0x80);
}
