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
#include <string>
#include <vector>

#include "normlab/analytics.hpp"
#include "normlab/digits.hpp"

namespace normlab::cli {

/// Everything one invocation resolved to. Filled by the flag parser,
/// consumed by the cmd_* entry points; tests can build it directly.
struct RunConfig {
  std::string subcommand;

  SourceSpec source;          // generator kinds; unset when reading a file
  bool have_source = false;
  std::uint64_t bits = 0;

  std::filesystem::path in_path;
  std::filesystem::path out_path;
  std::string format = "json";  // json | csv | both

  std::string checkpoints = "log2";  // log2 | linear:M | n1,n2,...
  std::vector<std::string> series;   // ones angle norm balance ns
  unsigned k_min = 0, k_max = 0;     // 0,0 = no block histograms
  WindowMode mode = WindowMode::overlapping;
  unsigned threads = 1;
  std::uint64_t ns_max = kNsSeriesCap;

  std::vector<std::string> claims;
  bool all_claims = false;
  std::uint64_t nmax = 12;
  std::uint64_t trials = 1000;
  std::uint64_t seed = 0;
  bool mutate = false;
  std::filesystem::path json_out;

  bool sidecar = true;
  bool use_cache = true;
};

// exit statuses: 0 success, 1 I/O or data failure, 2 usage error
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

int cmd_digits(const RunConfig& cfg);
int cmd_analyze(const RunConfig& cfg);
int cmd_verify(const RunConfig& cfg);
int cmd_report(const RunConfig& cfg);

/// Parses checkpoint presets against a stream of N digits.
std::vector<std::uint64_t> make_checkpoints(const std::string& spec,
                                            std::uint64_t n);

/// Full CLI entry point; argv[0] is the program name.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);  // args without program name

}  // namespace normlab::cli
