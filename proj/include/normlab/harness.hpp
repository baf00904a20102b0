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
#include <string>
#include <vector>

#include "normlab/vecrep.hpp"

namespace normlab {

/// The identities the harness can check at finite scale.
enum class Claim {
  propnorm,          // ns norm^2 == x*
  norme,             // popcount(v) + popcount(v^c) == n
  ns_pythagoras,     // x* + (x^c)* == 2^n - 1
  scale_invariance,  // bits -> x* -> bits round-trips; sqrt prefixes match isqrt
  teo1_identity,     // cos^2(angle) == popcount/n, norm_ratio^2 == 2*ones_ratio
  rebalance,         // rebalanced blocks preserve x* and stay within rounding
};

const char* claim_name(Claim c);
std::optional<Claim> parse_claim(const std::string& name);
std::vector<Claim> all_claims();

struct VerificationResult {
  Claim claim;
  std::string mode;  // "exhaustive" or "exhaustive+randomized(seed=S)"
  std::uint64_t nmax = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  bool mutated = false;
  std::uint64_t instances = 0;
  std::uint64_t failure_count = 0;
  std::vector<std::string> failures;  // capped sample of counterexamples

  bool pass() const { return failure_count == 0; }
};

/// Checks one claim exhaustively over all 2^n vectors for n <= 12 and with
/// `trials` seeded random instances for 12 < n <= nmax. With mutate set,
/// the claim's identity is deliberately perturbed; a healthy checker must
/// then report failures (guards against vacuous tests).
VerificationResult verify_claim(Claim claim, std::uint64_t nmax,
                                std::uint64_t trials, std::uint64_t seed,
                                bool mutate = false);

/// Ones redistributed across the ns blocks so every block's proportion
/// approaches the global ratio x*/(2^n - 1): per-block target
/// size_i * x*/(2^n-1), rounded to nearest, drift corrected greedily from
/// the largest block down. Entries are never materialized.
struct RebalancedNs {
  std::uint64_t n = 0;
  std::vector<std::uint64_t> block_sizes;  // 2^(n-1) ... 2^0
  std::vector<std::uint64_t> block_ones;
  std::uint64_t total_ones = 0;  // == x*
};

inline constexpr std::uint64_t kRebalanceCap = 40;

RebalancedNs rebalance_permutation(const PrefixVector& v);

/// Draw policies for assembling a length-n sequence from the rebalanced
/// blocks (canonical layout: ones first within each block).
struct IndexPolicy {
  std::uint64_t index = 0;
};
struct SeededUniformPolicy {
  std::uint64_t seed = 0;
};

std::vector<int> ordered_sequence_draw(const RebalancedNs& r,
                                       const IndexPolicy& policy);
std::vector<int> ordered_sequence_draw(const RebalancedNs& r,
                                       const SeededUniformPolicy& policy);

}  // namespace normlab
