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
#include "normlab/emit.hpp"

#include <cstdio>

namespace normlab {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string pattern_string(std::uint64_t value, unsigned k) {
  std::string s(k, '0');
  for (unsigned i = 0; i < k; ++i) {
    if ((value >> (k - 1 - i)) & 1) s[i] = '1';
  }
  return s;
}

std::string window_mode_name(WindowMode mode) {
  return mode == WindowMode::overlapping ? "overlapping" : "disjoint";
}

Json series_json(const SeriesReport& series) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["statistic"] = series.statistic;
  j["source"] = series.source;
  Json points = Json::array();
  for (const auto& p : series.points) {
    Json e;
    e["n"] = p.n;
    if (p.value) {
      e["value"] = *p.value;
    } else {
      e["value"] = nullptr;
    }
    if (p.predicted) e["predicted"] = *p.predicted;
    if (!p.note.empty()) e["note"] = p.note;
    points.push_back(std::move(e));
  }
  j["checkpoints"] = std::move(points);
  return j;
}

Json histogram_json(const BlockHistogram& h, bool include_counts) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["k"] = h.k;
  j["mode"] = window_mode_name(h.mode);
  j["windows"] = h.windows;
  const DeviationStats stats = normality_deviation(h);
  j["max_abs_dev"] = stats.max_abs_dev;
  j["chi_square"] = stats.chi_square;
  if (include_counts) {
    // counts[i] is the count of the pattern whose MSB-first value is i
    j["counts"] = h.counts;
  }
  return j;
}

Json verification_json(std::span<const VerificationResult> results) {
  Json j;
  j["schema"] = kSchemaVersion;
  Json claims = Json::array();
  bool all_pass = true;
  for (const auto& r : results) {
    Json e;
    e["claim"] = claim_name(r.claim);
    e["mode"] = r.mode;
    e["nmax"] = r.nmax;
    e["trials"] = r.trials;
    e["seed"] = r.seed;
    e["mutated"] = r.mutated;
    e["instances"] = r.instances;
    e["failure_count"] = r.failure_count;
    e["failures"] = r.failures;
    e["pass"] = r.pass();
    all_pass = all_pass && r.pass();
    claims.push_back(std::move(e));
  }
  j["claims"] = std::move(claims);
  j["all_pass"] = all_pass;
  return j;
}

Json sidecar_json(const SourceSpec& spec, std::uint64_t bits,
                  const std::string& created_utc) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["kind"] = spec.kind;
  j["parameters"] = spec.params;
  j["bits"] = bits;
  j["generator_version"] = kGeneratorVersion;
  j["created"] = created_utc;
  return j;
}

void series_csv_rows(const SeriesReport& series, std::ostream& out) {
  for (const auto& p : series.points) {
    out << series.statistic << ',' << p.n << ',';
    if (p.value) out << format_double(*p.value);
    out << ',';
    if (p.predicted) out << format_double(*p.predicted);
    out << ',' << p.note << '\n';
  }
}

void histogram_csv_rows(const BlockHistogram& h, std::ostream& out) {
  for (std::uint64_t i = 0; i < h.counts.size(); ++i) {
    out << h.k << ',' << window_mode_name(h.mode) << ',' << h.windows << ','
        << pattern_string(i, h.k) << ',' << h.counts[i] << '\n';
  }
}

}  // namespace normlab
