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

#include <cmath>
#include <numbers>
#include <random>

#include "normlab/analytics.hpp"
#include "normlab/bigint.hpp"

using namespace normlab;

namespace {

// fixtures computed with an independent bignum oracle (gmpy2/sympy):
//   popcount of the first n digits of sqrt(2):
//     n=1024 -> 502, n=65536 -> 32630, n=1e6 -> 499881, n=2^20 -> 523928
//   popcount of the first 1e6 digits of champernowne2 -> 530199
constexpr std::uint64_t kSqrt2Pc1024 = 502;
constexpr std::uint64_t kSqrt2Pc65536 = 32630;
constexpr std::uint64_t kSqrt2Pc1e6 = 499881;
constexpr std::uint64_t kChampPc1e6 = 530199;

BitBuffer random_bits(std::uint64_t seed, std::uint64_t len) {
  std::mt19937_64 rng(seed);
  BitBuffer b;
  b.reserve_bits(len);
  for (std::uint64_t i = 0; i < len; ++i) {
    b.push_back(static_cast<int>(rng() & 1));
  }
  return b;
}

}  // namespace

TEST_CASE("ones_ratio: reference streams") {
  {
    auto src = make_alternating_source();
    const std::uint64_t cps[] = {2, 4, 6};
    const auto r = ones_ratio_series(*src, cps);
    for (const auto& p : r.points) CHECK(*p.value == 0.5);
  }
  {
    auto src = make_ones_source();
    const std::uint64_t cps[] = {8};
    CHECK(*ones_ratio_series(*src, cps).points[0].value == 1.0);
  }
}

TEST_CASE("ones_ratio of sqrt(2) at 1e6 matches the oracle popcount") {
  auto src = make_sqrt_source(2);
  const std::uint64_t cps[] = {1024, 65536, 1000000};
  const auto pcs = popcount_checkpoints(*src, cps);
  CHECK(pcs[0] == kSqrt2Pc1024);
  CHECK(pcs[1] == kSqrt2Pc65536);
  CHECK(pcs[2] == kSqrt2Pc1e6);
  // and the derived ratio sits within the finite-prefix band
  const double ratio = static_cast<double>(pcs[2]) / 1e6;
  CHECK(ratio == doctest::Approx(0.499881).epsilon(1e-12));
  CHECK(std::abs(ratio - 0.5) < 2e-3);
}

TEST_CASE("angle: reference streams and the zero-prefix note") {
  {
    auto src = make_alternating_source();
    const std::uint64_t cps[] = {2, 10, 100};
    for (const auto& p : angle_series(*src, cps).points) {
      CHECK(*p.value == doctest::Approx(std::numbers::pi / 4).epsilon(1e-12));
    }
  }
  {
    auto src = make_ones_source();
    const std::uint64_t cps[] = {16};
    CHECK(*angle_series(*src, cps).points[0].value == 0.0);
  }
  {
    BitBuffer zeros;
    zeros.append_run(0, 8);
    auto src = make_buffer_source(zeros, "zeros");
    const std::uint64_t cps[] = {4, 8};
    const auto r = angle_series(*src, cps);
    CHECK_FALSE(r.points[0].value.has_value());
    CHECK(r.points[0].note == "zero prefix: angle undefined");
  }
}

TEST_CASE("angle of champernowne2 at 1e6: the true oracle value") {
  // the binary Champernowne prefix is ones-heavy (every integer leads with
  // a 1), so the angle sits well off pi/4 at this scale
  auto src = make_champernowne2_source();
  const std::uint64_t cps[] = {1000000};
  const auto pcs = popcount_checkpoints(*src, cps);
  CHECK(pcs[0] == kChampPc1e6);
  const double angle = std::acos(std::sqrt(static_cast<double>(pcs[0]) / 1e6));
  CHECK(angle == doctest::Approx(0.7551807726104701).epsilon(1e-12));
  CHECK(std::abs(angle - std::numbers::pi / 4) ==
        doctest::Approx(0.03021739078697816).epsilon(1e-9));
}

TEST_CASE("norm_ratio: reference streams and sqrt(2)") {
  {
    auto src = make_alternating_source();
    const std::uint64_t cps[] = {2, 8, 64};
    for (const auto& p : norm_ratio_series(*src, cps).points) {
      CHECK(*p.value == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  {
    auto src = make_ones_source();
    const std::uint64_t cps[] = {32};
    CHECK(*norm_ratio_series(*src, cps).points[0].value ==
          doctest::Approx(std::numbers::sqrt2).epsilon(1e-12));
  }
  {
    auto src = make_sqrt_source(2);
    const std::uint64_t cps[] = {1000000};
    const auto r = norm_ratio_series(*src, cps);
    CHECK(*r.points[0].value ==
          doctest::Approx(0.9998809929186573).epsilon(1e-12));
    CHECK(std::abs(*r.points[0].value - 1.0) < 4e-3);
  }
}

TEST_CASE("balance_gap: reference streams") {
  {
    auto src = make_alternating_source();
    const std::uint64_t cps[] = {2, 100};
    for (const auto& p : balance_gap_series(*src, cps).points) {
      CHECK(*p.value == 0.0);
    }
  }
  {
    auto src = make_ones_source();
    const std::uint64_t cps[] = {5, 50};
    for (const auto& p : balance_gap_series(*src, cps).points) {
      CHECK(*p.value == 1.0);
    }
  }
  {
    // true oracle values at 1e6: sqrt(2) is tight, champernowne2 is not
    auto sq = make_sqrt_source(2);
    const std::uint64_t cps[] = {1000000};
    CHECK(*balance_gap_series(*sq, cps).points[0].value ==
          doctest::Approx(0.000238).epsilon(1e-12));
    auto ch = make_champernowne2_source();
    CHECK(*balance_gap_series(*ch, cps).points[0].value ==
          doctest::Approx(0.060398).epsilon(1e-12));
  }
}

TEST_CASE("series reject non-increasing checkpoints") {
  auto src = make_ones_source();
  const std::uint64_t bad[] = {4, 4, 8};
  CHECK_THROWS_AS(ones_ratio_series(*src, bad), std::invalid_argument);
  const std::uint64_t zero[] = {0, 4};
  CHECK_THROWS_AS(ones_ratio_series(*src, zero), std::invalid_argument);
}

TEST_CASE("ns_ratio of sqrt(2): exact values and convergence") {
  auto src = make_sqrt_source(2);
  const std::uint64_t cps[] = {4, 8, 16, 32, 64, 128, 256};
  const auto r = ns_ratio_series(*src, cps);
  // n=4: x* = 11, ratio sqrt(11/8); predicted sqrt(16/15)
  CHECK(*r.points[0].value ==
        doctest::Approx(1.1726039399558574).epsilon(1e-12));
  CHECK(*r.points[0].predicted ==
        doctest::Approx(1.0327955589886444).epsilon(1e-12));
  // the exact series settles at 2^(1/4), the predicted one at 1
  CHECK(*r.points.back().value ==
        doctest::Approx(1.189207115002721).epsilon(1e-12));
  CHECK(*r.points.back().predicted == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t i = 1; i < r.points.size(); ++i) {
    if (r.points[i].n > 64) {
      CHECK(std::abs(*r.points[i].value - *r.points[i - 1].value) < 1e-3);
    }
  }
}

TEST_CASE("ns_ratio of constant-ones tends to sqrt(2)") {
  auto src = make_ones_source();
  const std::uint64_t cps[] = {4, 10, 20};
  const auto r = ns_ratio_series(*src, cps);
  // x* = 2^n - 1 exactly
  CHECK(*r.points[0].value ==
        doctest::Approx(std::sqrt(15.0 / 8.0)).epsilon(1e-12));
  CHECK(std::abs(*r.points.back().value - std::numbers::sqrt2) < 1e-5);
}

TEST_CASE("ns_ratio refuses checkpoints beyond the exact cap") {
  auto src = make_ones_source();
  const std::uint64_t cps[] = {4096, 5000};
  CHECK_THROWS_AS(ns_ratio_series(*src, cps), std::invalid_argument);
}

TEST_CASE("block histogram: tiny pinned cases") {
  BitBuffer b;
  for (int x : {1, 0, 1, 0, 1, 0}) b.push_back(x);
  {
    const auto h = block_histogram(b, 2, WindowMode::overlapping);
    CHECK(h.windows == 5);
    CHECK(h.counts[0b10] == 3);
    CHECK(h.counts[0b01] == 2);
    CHECK(h.counts[0b00] == 0);
    CHECK(h.counts[0b11] == 0);
  }
  {
    const auto h = block_histogram(b, 2, WindowMode::disjoint);
    CHECK(h.windows == 3);
    CHECK(h.counts[0b10] == 3);
  }
  BitBuffer ones;
  ones.append_run(1, 4);
  const auto h1 = block_histogram(ones, 1);
  CHECK(h1.counts[1] == 4);
  CHECK(h1.counts[0] == 0);
}

TEST_CASE("block histogram rejects bad k") {
  BitBuffer b;
  b.append_run(1, 16);
  CHECK_THROWS_AS(block_histogram(b, 0), std::invalid_argument);
  CHECK_THROWS_AS(block_histogram(b, 25), std::invalid_argument);
  CHECK_THROWS_AS(block_histogram(b, 17), std::invalid_argument);
}

TEST_CASE("sqrt(2) first 1e6 bits, k=8: frozen histogram statistics") {
  auto src = make_sqrt_source(2);
  BitBuffer bits;
  src->emit(bits, 1000000);
  const auto h = block_histogram(bits, 8, WindowMode::overlapping);
  REQUIRE(h.windows == 999993);
  std::uint64_t lo = h.counts[0], hi = h.counts[0];
  for (std::uint64_t c : h.counts) {
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  CHECK(lo == 3771);
  CHECK(hi == 4059);
  // every pattern within 20% of the uniform expectation 1e6/256
  CHECK(static_cast<double>(lo) >= 0.8 * 1000000.0 / 256.0);
  CHECK(static_cast<double>(hi) <= 1.2 * 1000000.0 / 256.0);
  const auto d = normality_deviation(h);
  CHECK(d.chi_square == doctest::Approx(198.0830015810111).epsilon(1e-9));
  CHECK(d.max_abs_dev ==
        doctest::Approx(0.00015277841319889275).epsilon(1e-9));
}

TEST_CASE("the 1/3 stream shows simple normality without k=2 uniformity") {
  auto src = make_rational_source(1, 3);
  BitBuffer bits;
  src->emit(bits, 1001);  // even window count keeps the deviation exact
  const auto h = block_histogram(bits, 2, WindowMode::overlapping);
  CHECK(h.windows == 1000);
  CHECK(h.counts[0b11] == 0);
  CHECK(h.counts[0b00] == 0);
  CHECK(h.counts[0b10] == 500);
  CHECK(h.counts[0b01] == 500);
  const auto d = normality_deviation(h);
  CHECK(d.max_abs_dev == 0.25);
  // yet the single-digit balance is perfect
  const auto h1 = block_histogram(bits, 1, WindowMode::overlapping);
  CHECK(h1.counts[1] == 501);
}

TEST_CASE("uniform histogram has zero deviation") {
  BlockHistogram h;
  h.k = 2;
  h.windows = 400;
  h.counts = {100, 100, 100, 100};
  const auto d = normality_deviation(h);
  CHECK(d.max_abs_dev == 0.0);
  CHECK(d.chi_square == 0.0);
  BlockHistogram empty;
  empty.k = 1;
  empty.counts = {0, 0};
  CHECK_THROWS_AS(normality_deviation(empty), std::invalid_argument);
}

TEST_CASE("seeded PRNG stream, k=8: chi-square lands in the chi2_255 band") {
  std::mt19937_64 rng(0);
  BitBuffer bits;
  bits.reserve_bits(1000000);
  while (bits.size() < 1000000) {
    bits.append_word_msb(rng(), 64);
  }
  const auto d =
      normality_deviation(block_histogram(bits, 8, WindowMode::overlapping));
  // frozen from the first verified run; deterministic because mt19937_64
  // is fully specified
  CHECK(d.chi_square == doctest::Approx(215.09739268174874).epsilon(1e-9));
  CHECK(d.chi_square > 180.0);
  CHECK(d.chi_square < 330.0);
}

TEST_CASE("streaming series equal per-prefix recomputation") {
  const BitBuffer bits = random_bits(99, 5000);
  const std::uint64_t cps[] = {1, 2, 3, 64, 65, 1000, 4999, 5000};
  auto src = make_buffer_source(bits, "random");
  const auto pcs = popcount_checkpoints(*src, cps);
  for (std::size_t i = 0; i < std::size(cps); ++i) {
    REQUIRE(pcs[i] == bits.popcount_prefix(cps[i]));
  }
}

TEST_CASE("algebraic links hold at every checkpoint") {
  const std::uint64_t cps[] = {3, 10, 77, 500, 2048};
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const BitBuffer bits = random_bits(seed, 2048);
    auto src = make_buffer_source(bits, "random");
    const auto pcs = popcount_checkpoints(*src, cps);
    const auto ones = ones_ratio_from_counts(cps, pcs, "r");
    const auto angle = angle_from_counts(cps, pcs, "r");
    const auto norm = norm_ratio_from_counts(cps, pcs, "r");
    const auto gap = balance_gap_from_counts(cps, pcs, "r");
    for (std::size_t i = 0; i < std::size(cps); ++i) {
      const double r = *ones.points[i].value;
      CHECK(std::abs(*gap.points[i].value - std::abs(1.0 - 2.0 * r)) <=
            1e-12);
      const double nr = *norm.points[i].value;
      CHECK(std::abs(nr * nr - 2.0 * r) <= 1e-12);
      if (angle.points[i].value) {
        const double c = std::cos(*angle.points[i].value);
        CHECK(std::abs(c * c - r) <= 1e-12);
      }
    }
  }
}

TEST_CASE("chunked histograms merge to the single-pass result") {
  const BitBuffer bits = random_bits(5, 4096);
  for (unsigned k : {1u, 2u, 5u, 8u}) {
    const auto full = block_histogram(bits, k, WindowMode::overlapping);
    const std::uint64_t mid = full.windows / 3;
    const auto left =
        block_histogram_range(bits, k, WindowMode::overlapping, 0, mid);
    const auto right = block_histogram_range(bits, k, WindowMode::overlapping,
                                             mid, full.windows);
    const auto merged = merge_histograms(left, right);
    REQUIRE(merged.windows == full.windows);
    REQUIRE(merged.counts == full.counts);
    for (unsigned t : {2u, 3u, 7u}) {
      const auto threaded = block_histogram(bits, k, WindowMode::overlapping, t);
      REQUIRE(threaded.counts == full.counts);
    }
  }
}

TEST_CASE("marginalizing a k-histogram matches the (k-1)-histogram") {
  const BitBuffer bits = random_bits(8, 4096);
  for (unsigned k : {2u, 3u, 8u}) {
    const auto hk = block_histogram(bits, k, WindowMode::overlapping);
    const auto hk1 = block_histogram(bits, k - 1, WindowMode::overlapping);
    for (std::uint64_t p = 0; p < hk1.counts.size(); ++p) {
      const std::uint64_t sum = hk.counts[p << 1] + hk.counts[(p << 1) | 1];
      const std::uint64_t diff =
          sum > hk1.counts[p] ? sum - hk1.counts[p] : hk1.counts[p] - sum;
      REQUIRE(diff <= 1);  // one boundary window
    }
  }
}

TEST_CASE("tail diagnostics recover slope and amplitude") {
  SeriesReport s{"synthetic", "test", {}};
  for (std::uint64_t n = 10; n <= 1000; n *= 2) {
    s.points.push_back({n, 3.0 * std::log(static_cast<double>(n)) + 1.0,
                        std::nullopt, ""});
  }
  const auto t = tail_diagnostics(s);
  CHECK(t.slope == doctest::Approx(3.0).epsilon(1e-9));
  SeriesReport flat{"flat", "test", {}};
  for (std::uint64_t n : {100, 200, 400, 800}) {
    flat.points.push_back({n, 2.5, std::nullopt, ""});
  }
  const auto tf = tail_diagnostics(flat);
  CHECK(tf.slope == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(tf.amplitude == 0.0);
}
