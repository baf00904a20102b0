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
#include "normlab/cli.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "normlab/emit.hpp"
#include "normlab/harness.hpp"

namespace normlab::cli {

namespace {

namespace fs = std::filesystem;

std::string utc_now_iso() {
  const std::time_t t = std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw NbitsError(NbitsErrc::io_failure,
                     "cannot open for write: " + path.string());
  }
  out << text;
  if (!out) {
    throw NbitsError(NbitsErrc::io_failure, "short write: " + path.string());
  }
}

void write_sidecar(const fs::path& nbits_path, const SourceSpec& spec,
                   std::uint64_t bits) {
  fs::path p = nbits_path;
  p += ".json";
  write_text(p, sidecar_json(spec, bits, utc_now_iso()).dump(2) + "\n");
}

std::optional<fs::path> cache_dir() {
  const char* dir = std::getenv("NORMLAB_CACHE_DIR");
  if (dir == nullptr || *dir == '\0') return std::nullopt;
  return fs::path(dir);
}

bool sidecar_matches(const fs::path& nbits_path, const SourceSpec& spec,
                     std::uint64_t bits) {
  fs::path p = nbits_path;
  p += ".json";
  std::ifstream in(p);
  if (!in) return false;
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) return false;
  return j.value("kind", "") == spec.kind &&
         j.value("parameters", Json::object()) == Json(spec.params) &&
         j.value("bits", std::uint64_t{0}) == bits;
}

/// Digits for a generator spec, via NORMLAB_CACHE_DIR when present.
BitBuffer load_or_generate(const SourceSpec& spec, std::uint64_t bits,
                           bool use_cache, bool* cache_hit) {
  if (cache_hit != nullptr) *cache_hit = false;
  std::optional<fs::path> dir = use_cache ? cache_dir() : std::nullopt;
  fs::path key_path;
  if (dir) {
    key_path = *dir / (spec.cache_key(bits) + ".nbits");
    if (fs::exists(key_path) && sidecar_matches(key_path, spec, bits)) {
      try {
        BitBuffer cached = read_bits(key_path);
        if (cached.size() == bits) {
          if (cache_hit != nullptr) *cache_hit = true;
          return cached;
        }
      } catch (const NbitsError&) {
        // unreadable cache entry; regenerate below
      }
    }
  }
  auto source = make_source(spec);
  BitBuffer out;
  out.reserve_bits(bits);
  source->emit(out, bits);
  if (dir) {
    std::error_code ec;
    fs::create_directories(*dir, ec);
    if (!ec) {
      try {
        write_bits(out, key_path);
        write_sidecar(key_path, spec, bits);
      } catch (const NbitsError&) {
        // cache is best-effort
      }
    }
  }
  return out;
}

unsigned parse_blocks_range(const std::string& text, unsigned& k_min,
                            unsigned& k_max) {
  const auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      k_min = k_max = static_cast<unsigned>(std::stoul(text));
    } else {
      k_min = static_cast<unsigned>(std::stoul(text.substr(0, dots)));
      k_max = static_cast<unsigned>(std::stoul(text.substr(dots + 2)));
    }
  } catch (const std::exception&) {
    throw std::invalid_argument("bad --blocks range: " + text);
  }
  if (k_min < 1 || k_max < k_min || k_max > kMaxBlockLength) {
    throw std::invalid_argument("bad --blocks range: " + text);
  }
  return k_max;
}

struct SourceFlags {
  std::uint64_t sqrt_m = 0;
  std::string rational;
  bool champernowne2 = false;
  bool copeland_erdos2 = false;
  bool ones = false;
  bool alternating = false;

  void add_to(CLI::App* app) {
    app->add_option("--sqrt", sqrt_m, "digits of sqrt(M), M >= 2 non-square");
    app->add_option("--rational", rational, "digits of P/Q (format P/Q)");
    app->add_flag("--champernowne2", champernowne2,
                  "binary Champernowne: 1 10 11 100 ... concatenated");
    app->add_flag("--copeland-erdos2", copeland_erdos2,
                  "primes concatenated in binary: 10 11 101 111 ...");
    app->add_flag("--ones", ones, "constant 111...");
    app->add_flag("--alternating", alternating, "1010... pattern");
  }

  /// Exactly one of the flags must have been used.
  SourceSpec resolve() const {
    std::vector<SourceSpec> picked;
    if (sqrt_m != 0) {
      picked.push_back({"sqrt", {{"m", std::to_string(sqrt_m)}}});
    }
    if (!rational.empty()) {
      const auto parts = split(rational, '/');
      if (parts.size() != 2) {
        throw std::invalid_argument("--rational wants P/Q, got: " + rational);
      }
      picked.push_back(
          {"rational", {{"p", parts[0]}, {"q", parts[1]}}});
    }
    if (champernowne2) picked.push_back({"champernowne2", {}});
    if (copeland_erdos2) picked.push_back({"copeland_erdos2", {}});
    if (ones) picked.push_back({"ones", {}});
    if (alternating) picked.push_back({"alternating", {}});
    if (picked.size() != 1) {
      throw std::invalid_argument(
          "exactly one source is required (--sqrt, --rational, "
          "--champernowne2, --copeland-erdos2, --ones, --alternating)");
    }
    return picked.front();
  }
};

Json series_bundle_entry(const SeriesReport& s) {
  Json j = series_json(s);
  const TailDiagnostics tail = tail_diagnostics(s);
  j["tail"] = {{"slope", tail.slope},
               {"amplitude", tail.amplitude},
               {"points", tail.points}};
  return j;
}

void emit_csv_outputs(const fs::path& base,
                      const std::vector<SeriesReport>& series,
                      const std::vector<BlockHistogram>& blocks,
                      bool full_counts) {
  {
    fs::path p = base;
    p += ".series.csv";
    std::ostringstream out;
    out << "statistic,n,value,predicted,note\n";
    for (const auto& s : series) series_csv_rows(s, out);
    write_text(p, out.str());
  }
  if (!blocks.empty()) {
    fs::path p = base;
    p += ".blocks.csv";
    std::ostringstream out;
    if (full_counts) {
      out << "k,mode,windows,pattern,count\n";
      for (const auto& h : blocks) histogram_csv_rows(h, out);
    } else {
      out << "k,mode,windows,max_abs_dev,chi_square\n";
      for (const auto& h : blocks) {
        const DeviationStats d = normality_deviation(h);
        out << h.k << ',' << window_mode_name(h.mode) << ',' << h.windows
            << ',' << format_double(d.max_abs_dev) << ','
            << format_double(d.chi_square) << '\n';
      }
    }
    write_text(p, out.str());
  }
}

int map_exception(const char* cmd) {
  try {
    throw;
  } catch (const CLI::ParseError&) {
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << cmd << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << cmd << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << cmd << ": " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace

std::vector<std::uint64_t> make_checkpoints(const std::string& spec,
                                            std::uint64_t n) {
  std::vector<std::uint64_t> out;
  if (spec == "log2") {
    for (std::uint64_t p = 1; p <= n; p *= 2) {
      out.push_back(p);
      if (p > n / 2) break;  // avoid overflow past 2^63
    }
  } else if (spec.rfind("linear:", 0) == 0) {
    const std::uint64_t m = std::stoull(spec.substr(7));
    if (m == 0) throw std::invalid_argument("linear:M wants M >= 1");
    for (std::uint64_t j = 1; j <= m; ++j) {
      const std::uint64_t cp = n * j / m;
      if (cp >= 1 && (out.empty() || cp > out.back())) out.push_back(cp);
    }
  } else {
    for (const auto& tok : split(spec, ',')) {
      out.push_back(std::stoull(tok));
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (out[i] == 0 || out[i] > n || (i > 0 && out[i] <= out[i - 1])) {
        throw std::invalid_argument(
            "checkpoints must be strictly increasing and within the stream");
      }
    }
  }
  return out;
}

int cmd_digits(const RunConfig& cfg) {
  try {
    const auto t0 = std::chrono::steady_clock::now();
    bool cache_hit = false;
    BitBuffer bits =
        load_or_generate(cfg.source, cfg.bits, cfg.use_cache, &cache_hit);
    write_bits(bits, cfg.out_path);
    if (cfg.sidecar) write_sidecar(cfg.out_path, cfg.source, cfg.bits);
    const double secs = seconds_since(t0);
    std::printf("wrote %llu digits of %s to %s in %.3f s (%.2f Mdigit/s)%s\n",
                static_cast<unsigned long long>(bits.size()),
                cfg.source.describe().c_str(), cfg.out_path.string().c_str(),
                secs,
                secs > 0 ? static_cast<double>(bits.size()) / secs / 1e6 : 0.0,
                cache_hit ? " [cache]" : "");
    return kExitOk;
  } catch (...) {
    return map_exception("digits");
  }
}

int cmd_analyze(const RunConfig& cfg) {
  try {
    const BitBuffer bits = read_bits(cfg.in_path);
    const std::uint64_t n = bits.size();
    if (n == 0) {
      std::cerr << "analyze: empty stream\n";
      return kExitFailure;
    }
    const auto checkpoints = make_checkpoints(cfg.checkpoints, n);

    Json j;
    j["schema"] = kSchemaVersion;
    j["command"] = "analyze";
    j["source"] = cfg.in_path.string();
    j["digits"] = n;

    std::vector<SeriesReport> series;
    if (!cfg.series.empty()) {
      bool want_counts = false;
      for (const auto& s : cfg.series) {
        if (s == "ones" || s == "angle" || s == "norm" || s == "balance") {
          want_counts = true;
        } else if (s != "ns") {
          throw std::invalid_argument("unknown series: " + s);
        }
      }
      std::vector<std::uint64_t> pcs;
      if (want_counts) {
        auto src = make_buffer_source(bits, cfg.in_path.string());
        pcs = popcount_checkpoints(*src, checkpoints);
      }
      const std::string label = cfg.in_path.string();
      for (const auto& s : cfg.series) {
        if (s == "ones") {
          series.push_back(ones_ratio_from_counts(checkpoints, pcs, label));
        } else if (s == "angle") {
          series.push_back(angle_from_counts(checkpoints, pcs, label));
        } else if (s == "norm") {
          series.push_back(norm_ratio_from_counts(checkpoints, pcs, label));
        } else if (s == "balance") {
          series.push_back(balance_gap_from_counts(checkpoints, pcs, label));
        } else if (s == "ns") {
          const std::uint64_t cap = std::min(cfg.ns_max, kNsSeriesCap);
          std::vector<std::uint64_t> ns_cps;
          for (std::uint64_t cp : checkpoints) {
            if (cp <= cap) ns_cps.push_back(cp);
          }
          if (!ns_cps.empty()) {
            auto src = make_buffer_source(bits, label);
            series.push_back(ns_ratio_series(*src, ns_cps));
          }
        }
      }
    }
    Json series_arr = Json::array();
    for (const auto& s : series) series_arr.push_back(series_bundle_entry(s));
    j["series"] = std::move(series_arr);

    std::vector<BlockHistogram> blocks;
    if (cfg.k_max >= 1) {
      for (unsigned k = cfg.k_min; k <= cfg.k_max; ++k) {
        blocks.push_back(block_histogram(bits, k, cfg.mode, cfg.threads));
      }
    }
    Json blocks_arr = Json::array();
    for (const auto& h : blocks) blocks_arr.push_back(histogram_json(h, true));
    j["histograms"] = std::move(blocks_arr);

    const std::string text = j.dump(2) + "\n";
    if (cfg.out_path.empty()) {
      std::cout << text;
    } else {
      if (cfg.format == "json" || cfg.format == "both") {
        fs::path p = cfg.out_path;
        p += ".json";
        write_text(p, text);
      }
      if (cfg.format == "csv" || cfg.format == "both") {
        emit_csv_outputs(cfg.out_path, series, blocks, true);
      }
    }
    return kExitOk;
  } catch (...) {
    return map_exception("analyze");
  }
}

int cmd_verify(const RunConfig& cfg) {
  try {
    std::vector<Claim> claims;
    if (cfg.all_claims) {
      claims = all_claims();
    } else {
      for (const auto& name : cfg.claims) {
        const auto c = parse_claim(name);
        if (!c) {
          std::cerr << "verify: unknown claim: " << name << "\n";
          return kExitUsage;
        }
        claims.push_back(*c);
      }
    }
    if (claims.empty()) {
      std::cerr << "verify: nothing to do (use --all or --claim NAME)\n";
      return kExitUsage;
    }
    std::vector<VerificationResult> results;
    results.reserve(claims.size());
    for (Claim c : claims) {
      results.push_back(
          verify_claim(c, cfg.nmax, cfg.trials, cfg.seed, cfg.mutate));
    }
    std::printf("%-18s %-34s %10s %9s  %s\n", "claim", "mode", "instances",
                "failures", "result");
    bool all_pass = true;
    for (const auto& r : results) {
      std::printf("%-18s %-34s %10llu %9llu  %s\n", claim_name(r.claim),
                  r.mode.c_str(),
                  static_cast<unsigned long long>(r.instances),
                  static_cast<unsigned long long>(r.failure_count),
                  r.pass() ? "PASS" : "FAIL");
      for (const auto& f : r.failures) {
        std::printf("    counterexample: %s\n", f.c_str());
      }
      all_pass = all_pass && r.pass();
    }
    if (!cfg.json_out.empty()) {
      write_text(cfg.json_out, verification_json(results).dump(2) + "\n");
    }
    return all_pass ? kExitOk : kExitFailure;
  } catch (...) {
    return map_exception("verify");
  }
}

int cmd_report(const RunConfig& cfg) {
  try {
    BitBuffer bits;
    std::string label;
    if (cfg.have_source) {
      bits = load_or_generate(cfg.source, cfg.bits, cfg.use_cache, nullptr);
      label = cfg.source.describe();
    } else {
      bits = read_bits(cfg.in_path);
      label = cfg.in_path.string();
    }
    const std::uint64_t n = bits.size();
    if (n == 0) {
      std::cerr << "report: empty stream\n";
      return kExitFailure;
    }
    const auto checkpoints = make_checkpoints(cfg.checkpoints, n);

    std::vector<std::uint64_t> pcs;
    {
      auto src = make_buffer_source(bits, label);
      pcs = popcount_checkpoints(*src, checkpoints);
    }
    std::vector<SeriesReport> series{
        ones_ratio_from_counts(checkpoints, pcs, label),
        angle_from_counts(checkpoints, pcs, label),
        norm_ratio_from_counts(checkpoints, pcs, label),
        balance_gap_from_counts(checkpoints, pcs, label),
    };

    // exact ns series plus the proportion-predicted companion
    const std::uint64_t cap = std::min({cfg.ns_max, kNsSeriesCap, n});
    std::vector<std::uint64_t> ns_cps;
    for (std::uint64_t cp : checkpoints) {
      if (cp <= cap) ns_cps.push_back(cp);
    }
    std::optional<SeriesReport> ns;
    if (!ns_cps.empty()) {
      auto src = make_buffer_source(bits, label);
      ns = ns_ratio_series(*src, ns_cps);
      series.push_back(*ns);
    }

    std::vector<BlockHistogram> blocks;
    const unsigned kmax =
        static_cast<unsigned>(std::min<std::uint64_t>(cfg.k_max, n));
    for (unsigned k = 1; k <= kmax; ++k) {
      blocks.push_back(block_histogram(bits, k, cfg.mode, cfg.threads));
    }

    Json j;
    j["schema"] = kSchemaVersion;
    j["command"] = "report";
    j["source"] = label;
    j["digits"] = n;
    Json series_arr = Json::array();
    for (std::size_t i = 0; i < 4; ++i) {
      series_arr.push_back(series_bundle_entry(series[i]));
    }
    j["series"] = std::move(series_arr);
    if (ns) {
      Json e = series_bundle_entry(*ns);
      // the empirical limit next to the claimed one, for side-by-side reading
      const auto& last = ns->points.back();
      e["limit_estimate"] = last.value ? Json(*last.value) : Json(nullptr);
      e["claimed_limit"] = 1.0;
      j["ns"] = std::move(e);
    }
    Json blocks_arr = Json::array();
    for (const auto& h : blocks) {
      blocks_arr.push_back(histogram_json(h, false));
    }
    j["block_deviations"] = std::move(blocks_arr);
    if (!series[3].points.empty() && series[3].points.back().value) {
      j["simple_normality"] = {
          {"balance_gap_final", *series[3].points.back().value},
          {"note",
           "balance gap tracks single-digit frequency only; see "
           "block_deviations for k >= 2"}};
    }

    if (cfg.format == "json" || cfg.format == "both") {
      fs::path p = cfg.out_path;
      p += ".json";
      write_text(p, j.dump(2) + "\n");
    }
    if (cfg.format == "csv" || cfg.format == "both") {
      emit_csv_outputs(cfg.out_path, series, blocks, false);
    }
    return kExitOk;
  } catch (...) {
    return map_exception("report");
  }
}

int run(int argc, const char* const* argv) {
  CLI::App app{"exact binary digit generation and normality analytics"};
  app.require_subcommand(1);

  RunConfig cfg;
  SourceFlags digit_source;
  SourceFlags report_source;
  std::string blocks_text;
  std::string mode_text = "overlapping";
  unsigned report_kmax = 12;

  CLI::App* digits = app.add_subcommand(
      "digits", "generate digits into a .nbits file");
  digit_source.add_to(digits);
  digits->add_option("--bits", cfg.bits, "digit count")->required();
  digits->add_option("--out", cfg.out_path, ".nbits output path")->required();
  digits->add_flag("!--no-sidecar", cfg.sidecar, "skip the .nbits.json sidecar");
  digits->add_flag("!--no-cache", cfg.use_cache,
                   "ignore NORMLAB_CACHE_DIR for this run");

  CLI::App* analyze = app.add_subcommand(
      "analyze", "series and block statistics over a .nbits file");
  analyze->add_option("--in", cfg.in_path, ".nbits input")->required();
  analyze->add_option("--series", cfg.series,
                      "statistics to emit: ones,angle,norm,balance,ns")
      ->delimiter(',');
  analyze->add_option("--checkpoints", cfg.checkpoints,
                      "log2 | linear:M | n1,n2,...");
  analyze->add_option("--blocks", blocks_text, "block lengths, K or A..B");
  analyze->add_option("--mode", mode_text, "overlapping | disjoint");
  analyze->add_option("--threads", cfg.threads, "histogram worker threads");
  analyze->add_option("--ns-max", cfg.ns_max, "largest n for the ns series");
  analyze->add_option("--out", cfg.out_path,
                      "output basename (default: json to stdout)");
  analyze->add_option("--format", cfg.format, "json | csv | both");

  CLI::App* verify = app.add_subcommand(
      "verify", "check the finite-scale identities");
  verify->add_flag("--all", cfg.all_claims, "verify every claim");
  verify->add_option("--claim", cfg.claims,
                     "claim name (repeatable): propnorm, norme, "
                     "ns_pythagoras, scale_invariance, teo1_identity, "
                     "rebalance");
  verify->add_option("--nmax", cfg.nmax, "largest vector length");
  verify->add_option("--trials", cfg.trials, "random instances past n=12");
  verify->add_option("--seed", cfg.seed, "seed for randomized instances");
  verify->add_flag("--mutate", cfg.mutate,
                   "run each checker against its seeded mutant (self-test; "
                   "healthy checkers must FAIL)");
  verify->add_option("--json", cfg.json_out, "also write results as JSON");

  CLI::App* report = app.add_subcommand(
      "report", "full study bundle for one stream");
  report->add_option("--in", cfg.in_path, ".nbits input");
  report_source.add_to(report);
  report->add_option("--bits", cfg.bits, "digit count when generating");
  report->add_option("--out", cfg.out_path, "output basename")->required();
  report->add_option("--format", cfg.format, "json | csv | both");
  report->add_option("--checkpoints", cfg.checkpoints,
                     "log2 | linear:M | n1,n2,...");
  report->add_option("--kmax", report_kmax, "largest block length");
  report->add_option("--mode", mode_text, "overlapping | disjoint");
  report->add_option("--threads", cfg.threads, "histogram worker threads");
  report->add_option("--ns-max", cfg.ns_max, "largest n for the ns series");
  report->add_flag("!--no-cache", cfg.use_cache,
                   "ignore NORMLAB_CACHE_DIR for this run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (mode_text == "overlapping") {
      cfg.mode = WindowMode::overlapping;
    } else if (mode_text == "disjoint") {
      cfg.mode = WindowMode::disjoint;
    } else {
      throw std::invalid_argument("bad --mode: " + mode_text);
    }
    if (digits->parsed()) {
      cfg.subcommand = "digits";
      cfg.source = digit_source.resolve();
      cfg.have_source = true;
      if (cfg.bits == 0) throw std::invalid_argument("--bits must be >= 1");
      return cmd_digits(cfg);
    }
    if (analyze->parsed()) {
      cfg.subcommand = "analyze";
      if (!blocks_text.empty()) {
        parse_blocks_range(blocks_text, cfg.k_min, cfg.k_max);
      }
      return cmd_analyze(cfg);
    }
    if (verify->parsed()) {
      cfg.subcommand = "verify";
      return cmd_verify(cfg);
    }
    if (report->parsed()) {
      cfg.subcommand = "report";
      if (cfg.in_path.empty()) {
        cfg.source = report_source.resolve();
        cfg.have_source = true;
        if (cfg.bits == 0) {
          throw std::invalid_argument("--bits is required when generating");
        }
      }
      if (report_kmax > kMaxBlockLength) {
        throw std::invalid_argument("--kmax above " +
                                    std::to_string(kMaxBlockLength));
      }
      cfg.k_min = 1;
      cfg.k_max = report_kmax;
      return cmd_report(cfg);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "normlab: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("normlab");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace normlab::cli
