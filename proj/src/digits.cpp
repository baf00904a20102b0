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
#include "normlab/digits.hpp"

#include <algorithm>
#include <bit>
#include <vector>

#include "normlab/bigint.hpp"

namespace normlab {

std::string SourceSpec::describe() const {
  if (kind == "sqrt") return "sqrt(" + params.at("m") + ")";
  if (kind == "rational") return params.at("p") + "/" + params.at("q");
  if (kind == "file") return "file:" + params.at("path");
  return kind;
}

std::string SourceSpec::cache_key(std::uint64_t bits) const {
  std::string key = kind;
  for (const auto& [k, v] : params) {
    key += "-" + k + v;
  }
  key += "_" + std::to_string(bits);
  // params may contain path separators (file kind); flatten them
  for (char& c : key) {
    if (c == '/' || c == '\\' || c == ':') c = '_';
  }
  return key;
}

namespace {

// ---------------------------------------------------------------------------
// sqrt(m)
//
// State is the pair (t, v) with v = isqrt(m * 4^t), kept exact. The bits of
// v, MSB first, are the first bit_length(v) digits of sqrt(m) starting at
// its leading 1; growing t by k appends k digits and turns (v+1)<<k into an
// upper bound for the next root, so Newton restarts nearly converged.
// ---------------------------------------------------------------------------
class SqrtSource final : public DigitSource {
 public:
  explicit SqrtSource(std::uint64_t m)
      : DigitSource({"sqrt", {{"m", std::to_string(m)}}}), m_(m) {
    v_ = newton_isqrt(Bigint(static_cast<unsigned long>(m)));
    s_ = bit_length(v_);  // integer-part digit count of sqrt(m)
    t_ = 0;
  }

 protected:
  void do_emit(BitBuffer& out, std::uint64_t count) override {
    ensure(position() + count);
    out.append_bits(aligned_.data(), position(), count);
  }

 private:
  void ensure(std::uint64_t digits_needed) {
    bool grew = false;
    while (s_ + t_ < digits_needed) {
      const std::uint64_t k = std::max<std::uint64_t>(t_, 64);
      Bigint scaled = Bigint(static_cast<unsigned long>(m_));
      scaled <<= 2 * (t_ + k);
      Bigint upper = (v_ + 1) << k;
      v_ = newton_isqrt(scaled, upper);
      t_ += k;
      grew = true;
    }
    if (grew || aligned_.empty()) {
      // re-export v MSB-aligned so digit i is bit i of the byte array
      const std::uint64_t len = s_ + t_;
      const unsigned pad = static_cast<unsigned>((8 - (len & 7)) & 7);
      Bigint shifted = v_ << pad;
      aligned_.assign((len + pad) / 8, 0);
      std::size_t written = 0;
      mpz_export(aligned_.data(), &written, 1, 1, 0, 0, shifted.get_mpz_t());
    }
  }

  std::uint64_t m_;
  std::uint64_t s_ = 0;  // digits before the binary point
  std::uint64_t t_ = 0;  // base-4 scale exponent
  Bigint v_;             // isqrt(m * 4^t)
  std::vector<std::uint8_t> aligned_;
};

// ---------------------------------------------------------------------------
// p/q long division. After normalizing to q <= r < 2q the digit sequence
// from the leading 1 is digit = r/q, r <- (r mod q) * 2. The state fits in
// 128 bits for any uint64 inputs.
// ---------------------------------------------------------------------------
class RationalSource final : public DigitSource {
 public:
  RationalSource(std::uint64_t p, std::uint64_t q)
      : DigitSource({"rational",
                     {{"p", std::to_string(p)}, {"q", std::to_string(q)}}}) {
    unsigned __int128 r = p, d = q;
    while (r >= 2 * d) d <<= 1;  // same digit stream as p / (q * 2^j)
    while (r < d) r <<= 1;
    r_ = r;
    q_ = d;
  }

 protected:
  void do_emit(BitBuffer& out, std::uint64_t count) override {
    out.reserve_bits(out.size() + count);
    for (std::uint64_t i = 0; i < count; ++i) {
      int digit = r_ >= q_ ? 1 : 0;
      out.push_back(digit);
      r_ = (r_ - (digit ? q_ : 0)) << 1;
    }
  }

 private:
  unsigned __int128 r_;
  unsigned __int128 q_;
};

// ---------------------------------------------------------------------------
// Champernowne base 2: 1 10 11 100 101 ...
// ---------------------------------------------------------------------------
class Champernowne2Source final : public DigitSource {
 public:
  Champernowne2Source() : DigitSource({"champernowne2", {}}) {}

 protected:
  void do_emit(BitBuffer& out, std::uint64_t count) override {
    out.reserve_bits(out.size() + count);
    while (count > 0) {
      const unsigned bl = std::bit_width(cur_);
      const std::uint64_t avail = bl - bitpos_;
      const unsigned take = static_cast<unsigned>(std::min<std::uint64_t>(avail, count));
      const std::uint64_t suffix =
          cur_ & (avail == 64 ? ~0ull : (1ull << avail) - 1);
      out.append_word_msb(suffix >> (avail - take), take);
      bitpos_ += take;
      count -= take;
      if (bitpos_ == bl) {
        ++cur_;
        bitpos_ = 0;
      }
    }
  }

 private:
  std::uint64_t cur_ = 1;
  std::uint64_t bitpos_ = 0;
};

// ---------------------------------------------------------------------------
// Copeland–Erdős base 2: primes concatenated in binary.
// ---------------------------------------------------------------------------
class PrimeStream {
 public:
  std::uint64_t next() {
    if (idx_ == primes_.size()) extend();
    return primes_[idx_++];
  }

 private:
  void extend() {
    // sieve [lo, hi); segments grow geometrically so there is no fixed bound
    const std::uint64_t lo = limit_;
    const std::uint64_t hi = std::max<std::uint64_t>(lo * 2, 64);
    ensure_base(hi);
    std::vector<bool> composite(hi - lo, false);
    for (std::uint64_t b : base_) {
      if (b * b >= hi) break;
      std::uint64_t first = std::max(b * b, ((lo + b - 1) / b) * b);
      for (std::uint64_t x = first; x < hi; x += b) composite[x - lo] = true;
    }
    for (std::uint64_t x = std::max<std::uint64_t>(lo, 2); x < hi; ++x) {
      if (!composite[x - lo]) primes_.push_back(x);
    }
    limit_ = hi;
  }

  void ensure_base(std::uint64_t hi) {
    // base primes up to sqrt(hi), by plain sieve
    std::uint64_t need = 2;
    while (need * need < hi) ++need;
    if (need < base_limit_) return;
    std::uint64_t n = std::max<std::uint64_t>(need + 1, 64);
    std::vector<bool> comp(n, false);
    base_.clear();
    for (std::uint64_t i = 2; i < n; ++i) {
      if (comp[i]) continue;
      base_.push_back(i);
      for (std::uint64_t j = i * i; j < n; j += i) comp[j] = true;
    }
    base_limit_ = n;
  }

  std::vector<std::uint64_t> primes_;
  std::vector<std::uint64_t> base_;
  std::size_t idx_ = 0;
  std::uint64_t limit_ = 2;
  std::uint64_t base_limit_ = 0;
};

class CopelandErdos2Source final : public DigitSource {
 public:
  CopelandErdos2Source() : DigitSource({"copeland_erdos2", {}}) {
    cur_ = primes_.next();
  }

 protected:
  void do_emit(BitBuffer& out, std::uint64_t count) override {
    out.reserve_bits(out.size() + count);
    while (count > 0) {
      const unsigned bl = std::bit_width(cur_);
      const std::uint64_t avail = bl - bitpos_;
      const unsigned take = static_cast<unsigned>(std::min<std::uint64_t>(avail, count));
      const std::uint64_t suffix =
          cur_ & (avail == 64 ? ~0ull : (1ull << avail) - 1);
      out.append_word_msb(suffix >> (avail - take), take);
      bitpos_ += take;
      count -= take;
      if (bitpos_ == bl) {
        cur_ = primes_.next();
        bitpos_ = 0;
      }
    }
  }

 private:
  PrimeStream primes_;
  std::uint64_t cur_ = 0;
  std::uint64_t bitpos_ = 0;
};

class BufferSource final : public DigitSource {
 public:
  BufferSource(BitBuffer bits, SourceSpec spec)
      : DigitSource(std::move(spec)), bits_(std::move(bits)) {}

 protected:
  void do_emit(BitBuffer& out, std::uint64_t count) override {
    if (position() + count > bits_.size()) {
      throw InsufficientDigitsError(position() + count, bits_.size());
    }
    out.append_bits(bits_.bytes().data(), position(), count);
  }

 private:
  BitBuffer bits_;
};

class OnesSource final : public DigitSource {
 public:
  OnesSource() : DigitSource({"ones", {}}) {}

 protected:
  void do_emit(BitBuffer& out, std::uint64_t count) override {
    out.append_run(1, count);
  }
};

class AlternatingSource final : public DigitSource {
 public:
  AlternatingSource() : DigitSource({"alternating", {}}) {}

 protected:
  void do_emit(BitBuffer& out, std::uint64_t count) override {
    out.reserve_bits(out.size() + count);
    std::uint64_t pos = position();
    while (count >= 64) {
      out.append_word_msb((pos & 1) ? 0x5555555555555555ull
                                    : 0xAAAAAAAAAAAAAAAAull,
                          64);
      pos += 64;
      count -= 64;
    }
    for (std::uint64_t i = 0; i < count; ++i, ++pos) {
      out.push_back(pos & 1 ? 0 : 1);
    }
  }
};

}  // namespace

std::unique_ptr<DigitSource> make_sqrt_source(std::uint64_t m) {
  if (m < 2) {
    throw std::invalid_argument("sqrt source: m must be >= 2, got " +
                                std::to_string(m));
  }
  Bigint z(static_cast<unsigned long>(m));
  if (mpz_perfect_square_p(z.get_mpz_t())) {
    throw std::invalid_argument(
        "sqrt source: m = " + std::to_string(m) +
        " is a perfect square; its expansion terminates");
  }
  return std::make_unique<SqrtSource>(m);
}

std::unique_ptr<DigitSource> make_rational_source(std::uint64_t p,
                                                  std::uint64_t q) {
  if (q == 0) throw std::invalid_argument("rational source: q must be >= 1");
  if (p == 0) {
    throw std::invalid_argument("rational source: p must be >= 1 (zero has no leading 1)");
  }
  return std::make_unique<RationalSource>(p, q);
}

std::unique_ptr<DigitSource> make_champernowne2_source() {
  return std::make_unique<Champernowne2Source>();
}

std::unique_ptr<DigitSource> make_copeland_erdos2_source() {
  return std::make_unique<CopelandErdos2Source>();
}

std::unique_ptr<DigitSource> make_file_source(const std::filesystem::path& p) {
  return std::make_unique<BufferSource>(
      read_bits(p), SourceSpec{"file", {{"path", p.string()}}});
}

std::unique_ptr<DigitSource> make_buffer_source(BitBuffer bits,
                                                std::string label) {
  return std::make_unique<BufferSource>(
      std::move(bits), SourceSpec{"file", {{"path", std::move(label)}}});
}

std::unique_ptr<DigitSource> make_ones_source() {
  return std::make_unique<OnesSource>();
}

std::unique_ptr<DigitSource> make_alternating_source() {
  return std::make_unique<AlternatingSource>();
}

std::unique_ptr<DigitSource> make_source(const SourceSpec& spec) {
  if (spec.kind == "sqrt") {
    return make_sqrt_source(std::stoull(spec.params.at("m")));
  }
  if (spec.kind == "rational") {
    return make_rational_source(std::stoull(spec.params.at("p")),
                                std::stoull(spec.params.at("q")));
  }
  if (spec.kind == "champernowne2") return make_champernowne2_source();
  if (spec.kind == "copeland_erdos2") return make_copeland_erdos2_source();
  if (spec.kind == "file") return make_file_source(spec.params.at("path"));
  if (spec.kind == "ones") return make_ones_source();
  if (spec.kind == "alternating") return make_alternating_source();
  throw std::invalid_argument("unknown source kind: " + spec.kind);
}

}  // namespace normlab
