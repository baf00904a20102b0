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

#include <ostream>
#include <span>
#include <string>

#include <json.hpp>

#include "normlab/analytics.hpp"
#include "normlab/digits.hpp"
#include "normlab/harness.hpp"

namespace normlab {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kGeneratorVersion = "normlab 0.1.0";

/// Shortest text that round-trips the double (17 significant digits).
std::string format_double(double v);

/// Binary pattern string of `value` over `k` positions, MSB first.
std::string pattern_string(std::uint64_t value, unsigned k);

Json series_json(const SeriesReport& series);
Json histogram_json(const BlockHistogram& h, bool include_counts = true);
Json verification_json(std::span<const VerificationResult> results);

/// `.nbits.json` sidecar payload. The timestamp lives here and only here,
/// so the main artifacts stay byte-reproducible.
Json sidecar_json(const SourceSpec& spec, std::uint64_t bits,
                  const std::string& created_utc);

/// Long-format rows "statistic,n,value,predicted,note" (no header).
void series_csv_rows(const SeriesReport& series, std::ostream& out);

/// Rows "k,mode,windows,pattern,count" (no header).
void histogram_csv_rows(const BlockHistogram& h, std::ostream& out);

std::string window_mode_name(WindowMode mode);

}  // namespace normlab
