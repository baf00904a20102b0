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
#include "normlab/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "normlab/bigint.hpp"

namespace normlab {

namespace {

constexpr std::uint64_t kChunkBits = 1u << 16;

void validate_checkpoints(std::span<const std::uint64_t> checkpoints) {
  std::uint64_t prev = 0;
  for (std::uint64_t n : checkpoints) {
    if (n <= prev) {
      throw std::invalid_argument(
          "checkpoints must be strictly increasing and nonzero");
    }
    prev = n;
  }
}

double checked_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + ": non-finite value");
  }
  return v;
}

}  // namespace

std::vector<std::uint64_t> popcount_checkpoints(
    DigitSource& source, std::span<const std::uint64_t> checkpoints) {
  validate_checkpoints(checkpoints);
  std::vector<std::uint64_t> out;
  out.reserve(checkpoints.size());
  BitBuffer chunk;
  std::uint64_t done = 0, ones = 0;
  for (std::uint64_t n : checkpoints) {
    while (done < n) {
      const std::uint64_t take = std::min(kChunkBits, n - done);
      chunk.clear();
      source.emit(chunk, take);
      ones += chunk.popcount();
      done += take;
    }
    out.push_back(ones);
  }
  return out;
}

SeriesReport ones_ratio_from_counts(std::span<const std::uint64_t> checkpoints,
                                    std::span<const std::uint64_t> popcounts,
                                    const std::string& source) {
  SeriesReport r{"ones_ratio", source, {}};
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    const double v = static_cast<double>(popcounts[i]) /
                     static_cast<double>(checkpoints[i]);
    r.points.push_back({checkpoints[i], checked_finite(v, "ones_ratio"), {}, ""});
  }
  return r;
}

SeriesReport angle_from_counts(std::span<const std::uint64_t> checkpoints,
                               std::span<const std::uint64_t> popcounts,
                               const std::string& source) {
  SeriesReport r{"angle", source, {}};
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (popcounts[i] == 0) {
      r.points.push_back({checkpoints[i], std::nullopt, {},
                          "zero prefix: angle undefined"});
      continue;
    }
    const double ratio = static_cast<double>(popcounts[i]) /
                         static_cast<double>(checkpoints[i]);
    r.points.push_back(
        {checkpoints[i], checked_finite(std::acos(std::sqrt(ratio)), "angle"),
         {}, ""});
  }
  return r;
}

SeriesReport norm_ratio_from_counts(std::span<const std::uint64_t> checkpoints,
                                    std::span<const std::uint64_t> popcounts,
                                    const std::string& source) {
  SeriesReport r{"norm_ratio", source, {}};
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    const double ratio = static_cast<double>(popcounts[i]) /
                         static_cast<double>(checkpoints[i]);
    r.points.push_back(
        {checkpoints[i], checked_finite(std::sqrt(2.0 * ratio), "norm_ratio"),
         {}, ""});
  }
  return r;
}

SeriesReport balance_gap_from_counts(
    std::span<const std::uint64_t> checkpoints,
    std::span<const std::uint64_t> popcounts, const std::string& source) {
  SeriesReport r{"balance_gap", source, {}};
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    const std::uint64_t n = checkpoints[i];
    const std::uint64_t twice = 2 * popcounts[i];
    const std::uint64_t gap = twice >= n ? twice - n : n - twice;
    const double v = static_cast<double>(gap) / static_cast<double>(n);
    r.points.push_back({n, checked_finite(v, "balance_gap"), {}, ""});
  }
  return r;
}

SeriesReport ones_ratio_series(DigitSource& source,
                               std::span<const std::uint64_t> checkpoints) {
  auto pcs = popcount_checkpoints(source, checkpoints);
  return ones_ratio_from_counts(checkpoints, pcs, source.spec().describe());
}

SeriesReport angle_series(DigitSource& source,
                          std::span<const std::uint64_t> checkpoints) {
  auto pcs = popcount_checkpoints(source, checkpoints);
  return angle_from_counts(checkpoints, pcs, source.spec().describe());
}

SeriesReport norm_ratio_series(DigitSource& source,
                               std::span<const std::uint64_t> checkpoints) {
  auto pcs = popcount_checkpoints(source, checkpoints);
  return norm_ratio_from_counts(checkpoints, pcs, source.spec().describe());
}

SeriesReport balance_gap_series(DigitSource& source,
                                std::span<const std::uint64_t> checkpoints) {
  auto pcs = popcount_checkpoints(source, checkpoints);
  return balance_gap_from_counts(checkpoints, pcs, source.spec().describe());
}

SeriesReport ns_ratio_series(DigitSource& source,
                             std::span<const std::uint64_t> checkpoints) {
  validate_checkpoints(checkpoints);
  if (!checkpoints.empty() && checkpoints.back() > kNsSeriesCap) {
    throw std::invalid_argument(
        "ns_ratio_series: n = " + std::to_string(checkpoints.back()) +
        " beyond the exact-integer cap " + std::to_string(kNsSeriesCap));
  }
  SeriesReport r{"ns_ratio", source.spec().describe(), {}};
  if (checkpoints.empty()) return r;
  BitBuffer prefix;
  source.emit(prefix, checkpoints.back());
  for (std::uint64_t n : checkpoints) {
    // x* of the n-digit prefix, exactly
    const std::uint64_t nbytes = (n + 7) / 8;
    Bigint x_star;
    mpz_import(x_star.get_mpz_t(), nbytes, 1, 1, 0, 0, prefix.bytes().data());
    x_star >>= (nbytes * 8 - n);
    const Bigint full = pow2(n);
    const double exact = ratio_sqrt(x_star, pow2(n - 1));
    const double predicted = ratio_sqrt(full, full - 1);
    r.points.push_back({n, checked_finite(exact, "ns_ratio"),
                        checked_finite(predicted, "ns_ratio predicted"), ""});
  }
  return r;
}

BlockHistogram block_histogram_range(const BitBuffer& bits, unsigned k,
                                     WindowMode mode, std::uint64_t w_begin,
                                     std::uint64_t w_end) {
  BlockHistogram h;
  h.k = k;
  h.mode = mode;
  h.counts.assign(std::uint64_t{1} << k, 0);
  h.windows = w_end - w_begin;
  const std::uint64_t mask = (std::uint64_t{1} << k) - 1;
  if (mode == WindowMode::overlapping) {
    // prime the rolling code with the k-1 bits before the first window end
    std::uint64_t code = 0;
    for (std::uint64_t p = w_begin; p < w_begin + k - 1; ++p) {
      code = (code << 1) | static_cast<unsigned>(bits[p]);
    }
    for (std::uint64_t s = w_begin; s < w_end; ++s) {
      code = ((code << 1) | static_cast<unsigned>(bits[s + k - 1])) & mask;
      ++h.counts[code];
    }
  } else {
    for (std::uint64_t w = w_begin; w < w_end; ++w) {
      std::uint64_t code = 0;
      const std::uint64_t base = w * k;
      for (unsigned j = 0; j < k; ++j) {
        code = (code << 1) | static_cast<unsigned>(bits[base + j]);
      }
      ++h.counts[code];
    }
  }
  return h;
}

BlockHistogram merge_histograms(const BlockHistogram& a,
                                const BlockHistogram& b) {
  if (a.k != b.k || a.mode != b.mode) {
    throw std::invalid_argument("merge_histograms: incompatible histograms");
  }
  BlockHistogram out = a;
  out.windows += b.windows;
  for (std::size_t i = 0; i < out.counts.size(); ++i) {
    out.counts[i] += b.counts[i];
  }
  return out;
}

BlockHistogram block_histogram(const BitBuffer& bits, unsigned k,
                               WindowMode mode, unsigned threads) {
  if (k < 1 || k > kMaxBlockLength) {
    throw std::invalid_argument("block_histogram: k must be in [1, " +
                                std::to_string(kMaxBlockLength) + "], got " +
                                std::to_string(k));
  }
  if (bits.size() < k) {
    throw std::invalid_argument(
        "block_histogram: k = " + std::to_string(k) + " exceeds stream length " +
        std::to_string(bits.size()));
  }
  const std::uint64_t windows = mode == WindowMode::overlapping
                                    ? bits.size() - k + 1
                                    : bits.size() / k;
  std::uint64_t nthreads = std::max(1u, threads);
  nthreads = std::min<std::uint64_t>(nthreads, windows);
  if (k >= 20) nthreads = 1;  // 2^k counters per worker; keep memory flat
  if (nthreads == 1) {
    return block_histogram_range(bits, k, mode, 0, windows);
  }
  std::vector<BlockHistogram> parts(nthreads);
  std::vector<std::thread> workers;
  workers.reserve(nthreads);
  for (std::uint64_t t = 0; t < nthreads; ++t) {
    const std::uint64_t w0 = windows * t / nthreads;
    const std::uint64_t w1 = windows * (t + 1) / nthreads;
    workers.emplace_back([&bits, k, mode, w0, w1, t, &parts] {
      parts[t] = block_histogram_range(bits, k, mode, w0, w1);
    });
  }
  for (auto& w : workers) w.join();
  BlockHistogram out = std::move(parts[0]);
  for (std::uint64_t t = 1; t < nthreads; ++t) {
    out = merge_histograms(out, parts[t]);
  }
  return out;
}

DeviationStats normality_deviation(const BlockHistogram& h) {
  if (h.windows == 0) {
    throw std::invalid_argument("normality_deviation: no windows");
  }
  const double expected =
      static_cast<double>(h.windows) / static_cast<double>(h.counts.size());
  const double uniform = 1.0 / static_cast<double>(h.counts.size());
  DeviationStats s;
  for (std::uint64_t c : h.counts) {
    const double freq = static_cast<double>(c) / static_cast<double>(h.windows);
    s.max_abs_dev = std::max(s.max_abs_dev, std::abs(freq - uniform));
    const double d = static_cast<double>(c) - expected;
    s.chi_square += d * d / expected;
  }
  return s;
}

TailDiagnostics tail_diagnostics(const SeriesReport& series) {
  TailDiagnostics t;
  if (series.points.empty()) return t;
  const double n_last = static_cast<double>(series.points.back().n);
  const double cutoff = n_last / 10.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  double lo = 0, hi = 0;
  std::uint64_t m = 0;
  for (const auto& p : series.points) {
    if (!p.value || static_cast<double>(p.n) < cutoff) continue;
    const double x = std::log(static_cast<double>(p.n));
    const double y = *p.value;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    lo = m == 0 ? y : std::min(lo, y);
    hi = m == 0 ? y : std::max(hi, y);
    ++m;
  }
  t.points = m;
  if (m >= 1) t.amplitude = hi - lo;
  if (m >= 2) {
    const double denom = static_cast<double>(m) * sxx - sx * sx;
    if (denom != 0.0) {
      t.slope = (static_cast<double>(m) * sxy - sx * sy) / denom;
    }
  }
  return t;
}

}  // namespace normlab
