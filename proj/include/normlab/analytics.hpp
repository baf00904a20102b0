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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "normlab/bitbuf.hpp"
#include "normlab/digits.hpp"

namespace normlab {

struct SeriesPoint {
  std::uint64_t n = 0;
  std::optional<double> value;      // absent when undefined at this n
  std::optional<double> predicted;  // companion value, ns series only
  std::string note;
};

/// A statistic sampled at increasing checkpoints, ready for emission.
struct SeriesReport {
  std::string statistic;
  std::string source;
  std::vector<SeriesPoint> points;
};

enum class WindowMode { overlapping, disjoint };

inline constexpr unsigned kMaxBlockLength = 24;

/// Counts of every length-k bit pattern over a stream. counts[p] is the
/// count of the pattern whose MSB-first value is p.
struct BlockHistogram {
  unsigned k = 0;
  WindowMode mode = WindowMode::overlapping;
  std::uint64_t windows = 0;
  std::vector<std::uint64_t> counts;  // size 2^k
};

struct DeviationStats {
  double max_abs_dev = 0.0;
  double chi_square = 0.0;
};

/// Ones in the first n digits for each checkpoint n, in one streaming pass.
std::vector<std::uint64_t> popcount_checkpoints(
    DigitSource& source, std::span<const std::uint64_t> checkpoints);

// Each series below is a single pass over the source with O(1) state per
// checkpoint. Checkpoints must be strictly increasing and nonzero.

/// popcount(n)/n, the ones-frequency of the prefix.
SeriesReport ones_ratio_series(DigitSource& source,
                               std::span<const std::uint64_t> checkpoints);

/// arccos(sqrt(popcount/n)); a checkpoint whose prefix is all zeros gets
/// no value, only a note.
SeriesReport angle_series(DigitSource& source,
                          std::span<const std::uint64_t> checkpoints);

/// ||prefix|| / sqrt(n/2) = sqrt(2*popcount/n).
SeriesReport norm_ratio_series(DigitSource& source,
                               std::span<const std::uint64_t> checkpoints);

/// | ||prefix||^2 - ||complement||^2 | / n = |2*popcount - n| / n.
SeriesReport balance_gap_series(DigitSource& source,
                                std::span<const std::uint64_t> checkpoints);

inline constexpr std::uint64_t kNsSeriesCap = 4096;

/// sqrt(x*(n)) / sqrt(2^n/2), from the exact integer representative, with
/// the proportion-predicted companion sqrt(2^n/(2^n-1)) in `predicted`.
/// Checkpoints are capped at kNsSeriesCap.
SeriesReport ns_ratio_series(DigitSource& source,
                             std::span<const std::uint64_t> checkpoints);

// Pure transforms used by the streaming wrappers above; exposed so one
// popcount pass can feed several series.
SeriesReport ones_ratio_from_counts(std::span<const std::uint64_t> checkpoints,
                                    std::span<const std::uint64_t> popcounts,
                                    const std::string& source);
SeriesReport angle_from_counts(std::span<const std::uint64_t> checkpoints,
                               std::span<const std::uint64_t> popcounts,
                               const std::string& source);
SeriesReport norm_ratio_from_counts(std::span<const std::uint64_t> checkpoints,
                                    std::span<const std::uint64_t> popcounts,
                                    const std::string& source);
SeriesReport balance_gap_from_counts(
    std::span<const std::uint64_t> checkpoints,
    std::span<const std::uint64_t> popcounts, const std::string& source);

/// Exact block-pattern counts, 1 <= k <= kMaxBlockLength <= n. With
/// threads > 1 the window range is split into chunks, each chunk reading
/// k-1 bits past its end; the merge is associative, so the result is
/// bit-exact regardless of thread count.
BlockHistogram block_histogram(const BitBuffer& bits, unsigned k,
                               WindowMode mode = WindowMode::overlapping,
                               unsigned threads = 1);

/// Counts over the window-index range [w_begin, w_end) only.
BlockHistogram block_histogram_range(const BitBuffer& bits, unsigned k,
                                     WindowMode mode, std::uint64_t w_begin,
                                     std::uint64_t w_end);

/// Elementwise sum of two partial histograms with identical k and mode.
BlockHistogram merge_histograms(const BlockHistogram& a,
                                const BlockHistogram& b);

/// max_p |count(p)/windows - 2^-k| and the chi-square statistic against
/// the uniform expectation.
DeviationStats normality_deviation(const BlockHistogram& h);

/// Least-squares slope of value against ln(n) over the last decade of
/// checkpoints (n >= n_last/10), plus the max-min amplitude there.
struct TailDiagnostics {
  double slope = 0.0;
  double amplitude = 0.0;
  std::uint64_t points = 0;
};
TailDiagnostics tail_diagnostics(const SeriesReport& series);

}  // namespace normlab
