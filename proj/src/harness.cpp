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
#include "normlab/harness.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "normlab/digits.hpp"

namespace normlab {

namespace {

constexpr std::uint64_t kExhaustiveMax = 12;
constexpr std::size_t kFailureSampleCap = 32;
constexpr double kFloatTol = 1e-12;

const char* kClaimNames[] = {"propnorm",         "norme",
                             "ns_pythagoras",    "scale_invariance",
                             "teo1_identity",    "rebalance"};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t i) {
  // splitmix64 step; derived per-instance seeds keep results independent
  // of evaluation order
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (i + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

PrefixVector vector_from_mask(std::uint64_t mask, std::uint64_t n) {
  BitBuffer buf;
  buf.reserve_bits(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    buf.push_back((mask >> (n - 1 - i)) & 1);
  }
  return PrefixVector::from_buffer(buf, n);
}

PrefixVector random_vector(std::mt19937_64& rng, std::uint64_t n) {
  BitBuffer buf;
  buf.reserve_bits(n);
  std::uint64_t word = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    if (i % 64 == 0) word = rng();
    buf.push_back((word >> (i % 64)) & 1);
  }
  return PrefixVector::from_buffer(buf, n);
}

std::string bits_string(const PrefixVector& v) {
  std::string s;
  s.reserve(v.size());
  for (std::uint64_t i = 0; i < v.size(); ++i) {
    s.push_back(v.bit(i) ? '1' : '0');
  }
  return s;
}

std::string describe_instance(const PrefixVector& v, const std::string& why) {
  std::string s = "n=" + std::to_string(v.size());
  if (v.size() <= 64) {
    s += " bits=" + bits_string(v);
  }
  return s + ": " + why;
}

// x* by the definition's inner product with weights 2^(n-i); this is the
// second route, independent of the byte-import path. The mutant replaces
// the weight 2^(n-i) with i.
Bigint weight_sum_representative(const PrefixVector& v, bool mutate) {
  Bigint acc = 0;
  const std::uint64_t n = v.size();
  for (std::uint64_t i = 1; i <= n; ++i) {
    if (!v.bit(i - 1)) continue;
    if (mutate) {
      acc += static_cast<unsigned long>(i);
    } else {
      acc += pow2(n - i);
    }
  }
  return acc;
}

// ---------------------------------------------------------------------------
// per-instance checkers; return true on pass, fill `why` on failure
// ---------------------------------------------------------------------------

bool check_propnorm(const PrefixVector& v, bool mutate, std::string& why) {
  const Bigint reference = weight_sum_representative(v, mutate);
  const Bigint x_star = ns_profile(v).x_star;
  if (x_star != reference) {
    why = "x* " + x_star.get_str() + " != weight sum " + reference.get_str();
    return false;
  }
  if (v.size() <= kNsMaterializeCap) {
    const std::uint64_t ns_norm2 = ns_vector(v).norm_squared();
    if (Bigint(static_cast<unsigned long>(ns_norm2)) != reference) {
      why = "ns norm^2 " + std::to_string(ns_norm2) + " != x* " +
            reference.get_str();
      return false;
    }
  }
  return true;
}

bool check_norme(const PrefixVector& v, bool mutate, std::string& why) {
  PrefixVector comp = v.complement();
  std::uint64_t comp_pc = comp.popcount();
  if (mutate) {
    // perturbed complement keeps the final bit unchanged
    comp_pc = comp_pc - (1 - v.bit(v.size() - 1)) + v.bit(v.size() - 1);
  }
  if (v.popcount() + comp_pc != v.size()) {
    why = "popcount " + std::to_string(v.popcount()) + " + complement " +
          std::to_string(comp_pc) + " != n";
    return false;
  }
  return true;
}

bool check_ns_pythagoras(const PrefixVector& v, bool mutate, std::string& why) {
  const NsProfile p = ns_profile(v);
  const NsProfile pc = ns_profile(v.complement());
  const Bigint expected = mutate ? pow2(v.size()) : pow2(v.size()) - 1;
  if (p.x_star + pc.x_star != expected ||
      p.complement_star != pc.x_star) {
    why = "x* + (x^c)* = " + Bigint(p.x_star + pc.x_star).get_str() +
          ", expected " + expected.get_str();
    return false;
  }
  return true;
}

bool check_scale_invariance(const PrefixVector& v, bool mutate,
                            std::string& why) {
  // the vector is recoverable from its integer representative: truncation
  // first or representation first makes no difference
  Bigint x = integer_representative(v);
  if (mutate) x += 1;
  const std::uint64_t n = v.size();
  for (std::uint64_t i = 0; i < n; ++i) {
    const int bit = mpz_tstbit(x.get_mpz_t(), n - 1 - i);
    if (bit != v.bit(i)) {
      why = "digit " + std::to_string(i) + " of x* mismatches the prefix";
      return false;
    }
  }
  return true;
}

bool check_teo1_identity(const PrefixVector& v, bool mutate, std::string& why) {
  if (v.popcount() == 0) return true;  // angle undefined; skipped upstream
  const double ratio =
      static_cast<double>(v.popcount()) / static_cast<double>(v.size());
  const double angle =
      mutate ? std::acos(ratio) : angle_to_ones(v);
  const double c = std::cos(angle);
  if (std::abs(c * c - ratio) > kFloatTol) {
    why = "cos^2(angle) deviates from popcount/n by " +
          std::to_string(std::abs(c * c - ratio));
    return false;
  }
  const double norm_ratio = std::sqrt(2.0 * ratio);
  if (std::abs(norm_ratio * norm_ratio - 2.0 * ratio) > kFloatTol) {
    why = "norm_ratio^2 deviates from 2*ones_ratio";
    return false;
  }
  return true;
}

std::vector<std::uint64_t> rebalance_targets(std::uint64_t n,
                                             std::uint64_t x_star,
                                             bool floor_rounding) {
  const std::uint64_t M = (std::uint64_t{1} << n) - 1;
  std::vector<std::uint64_t> ones(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const unsigned __int128 num =
        static_cast<unsigned __int128>(std::uint64_t{1} << (n - 1 - i)) *
        x_star;
    if (floor_rounding) {
      ones[i] = static_cast<std::uint64_t>(num / M);
    } else {
      ones[i] = static_cast<std::uint64_t>((2 * num + M) / (2 * (unsigned __int128)M));
    }
  }
  return ones;
}

RebalancedNs rebalance_impl(const PrefixVector& v, bool mutate) {
  const std::uint64_t n = v.size();
  if (n > kRebalanceCap) {
    throw std::invalid_argument("rebalance_permutation: n exceeds cap " +
                                std::to_string(kRebalanceCap));
  }
  const Bigint x = integer_representative(v);
  const std::uint64_t x_star = mpz_get_ui(x.get_mpz_t());
  RebalancedNs r;
  r.n = n;
  r.block_sizes.resize(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    r.block_sizes[i] = std::uint64_t{1} << (n - 1 - i);
  }
  // the mutant floors and skips correction, which loses popcount(x*) ones
  r.block_ones = rebalance_targets(n, x_star, mutate);
  if (!mutate) {
    // nearest rounding sums to x* exactly here (the fractional parts are the
    // n rotations of x*'s bit pattern), but correct any drift greedily from
    // the largest block down anyway
    std::int64_t drift = 0;
    for (std::uint64_t o : r.block_ones) drift += static_cast<std::int64_t>(o);
    drift -= static_cast<std::int64_t>(x_star);
    while (drift != 0) {
      bool moved = false;
      for (std::uint64_t i = 0; i < n && drift != 0; ++i) {
        if (drift > 0 && r.block_ones[i] > 0) {
          --r.block_ones[i];
          --drift;
          moved = true;
        } else if (drift < 0 && r.block_ones[i] < r.block_sizes[i]) {
          ++r.block_ones[i];
          ++drift;
          moved = true;
        }
      }
      if (!moved) {
        throw std::logic_error("rebalance_permutation: uncorrectable drift");
      }
    }
  }
  r.total_ones = 0;
  for (std::uint64_t o : r.block_ones) r.total_ones += o;
  return r;
}

bool check_rebalance(const PrefixVector& v, bool mutate, std::string& why) {
  const RebalancedNs r = rebalance_impl(v, mutate);
  const Bigint x = integer_representative(v);
  const std::uint64_t x_star = mpz_get_ui(x.get_mpz_t());
  if (r.total_ones != x_star) {
    why = "total ones " + std::to_string(r.total_ones) + " != x* " +
          std::to_string(x_star);
    return false;
  }
  const std::uint64_t M = (std::uint64_t{1} << v.size()) - 1;
  std::uint64_t off_target = 0;
  for (std::uint64_t i = 0; i < r.block_sizes.size(); ++i) {
    if (r.block_ones[i] > r.block_sizes[i]) {
      why = "block " + std::to_string(i) + " overfull";
      return false;
    }
    // |ones_i - size_i * x*/M| <= 1, i.e. |ones_i*M - size_i*x*| <= M
    const unsigned __int128 lhs =
        static_cast<unsigned __int128>(r.block_ones[i]) * M;
    const unsigned __int128 rhs =
        static_cast<unsigned __int128>(r.block_sizes[i]) * x_star;
    const unsigned __int128 diff = lhs > rhs ? lhs - rhs : rhs - lhs;
    if (diff > M) ++off_target;
  }
  if (off_target > 1) {
    why = std::to_string(off_target) + " blocks off their rounding target";
    return false;
  }
  return true;
}

bool check_instance(Claim claim, const PrefixVector& v, bool mutate,
                    std::string& why) {
  switch (claim) {
    case Claim::propnorm:
      return check_propnorm(v, mutate, why);
    case Claim::norme:
      return check_norme(v, mutate, why);
    case Claim::ns_pythagoras:
      return check_ns_pythagoras(v, mutate, why);
    case Claim::scale_invariance:
      return check_scale_invariance(v, mutate, why);
    case Claim::teo1_identity:
      return check_teo1_identity(v, mutate, why);
    case Claim::rebalance:
      return check_rebalance(v, mutate, why);
  }
  throw std::invalid_argument("unknown claim");
}

// sqrt-prefix leg of the scale-invariance claim: representation of the
// n-digit truncation equals the independently computed isqrt(2 * 4^(n-1))
void check_sqrt_prefixes(std::uint64_t nmax, bool mutate,
                         VerificationResult& result) {
  const std::uint64_t cap = std::min<std::uint64_t>(nmax, 512);
  auto src = make_sqrt_source(2);
  BitBuffer prefix;
  src->emit(prefix, cap);
  for (std::uint64_t n = 1; n <= cap; n *= 2) {
    ++result.instances;
    const PrefixVector v = PrefixVector::from_buffer(prefix, n);
    Bigint expected = newton_isqrt(Bigint(2) << (2 * (n - 1)));
    if (mutate) expected += 1;
    if (integer_representative(v) != expected) {
      ++result.failure_count;
      if (result.failures.size() < kFailureSampleCap) {
        result.failures.push_back(
            "sqrt(2) n=" + std::to_string(n) +
            ": x* != isqrt(2*4^(n-1))");
      }
    }
  }
}

}  // namespace

const char* claim_name(Claim c) { return kClaimNames[static_cast<int>(c)]; }

std::optional<Claim> parse_claim(const std::string& name) {
  for (int i = 0; i < 6; ++i) {
    if (name == kClaimNames[i]) return static_cast<Claim>(i);
  }
  return std::nullopt;
}

std::vector<Claim> all_claims() {
  return {Claim::propnorm,         Claim::norme,
          Claim::ns_pythagoras,    Claim::scale_invariance,
          Claim::teo1_identity,    Claim::rebalance};
}

VerificationResult verify_claim(Claim claim, std::uint64_t nmax,
                                std::uint64_t trials, std::uint64_t seed,
                                bool mutate) {
  if (nmax < 2) {
    throw std::invalid_argument("verify_claim: nmax must be >= 2");
  }
  VerificationResult result;
  result.claim = claim;
  result.nmax = nmax;
  result.trials = trials;
  result.seed = seed;
  result.mutated = mutate;

  std::uint64_t claim_nmax = nmax;
  if (claim == Claim::rebalance) {
    claim_nmax = std::min(claim_nmax, kRebalanceCap);
  }

  auto record = [&](const PrefixVector& v, const std::string& why) {
    ++result.failure_count;
    if (result.failures.size() < kFailureSampleCap) {
      result.failures.push_back(describe_instance(v, why));
    }
  };

  // exhaustive sweep over every vector of every length up to 12
  const std::uint64_t ex_max = std::min(claim_nmax, kExhaustiveMax);
  for (std::uint64_t n = 1; n <= ex_max; ++n) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      const PrefixVector v = vector_from_mask(mask, n);
      std::string why;
      ++result.instances;
      if (!check_instance(claim, v, mutate, why)) record(v, why);
    }
  }

  // seeded random instances beyond the exhaustive range
  if (claim_nmax > kExhaustiveMax && trials > 0) {
    result.mode = "exhaustive+randomized(seed=" + std::to_string(seed) + ")";
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
      std::mt19937_64 rng(mix_seed(seed, trial));
      const std::uint64_t span = claim_nmax - kExhaustiveMax;
      const std::uint64_t n = kExhaustiveMax + 1 + rng() % span;
      const PrefixVector v = random_vector(rng, n);
      std::string why;
      ++result.instances;
      if (!check_instance(claim, v, mutate, why)) record(v, why);
    }
  } else {
    result.mode = "exhaustive";
  }

  if (claim == Claim::scale_invariance) {
    check_sqrt_prefixes(nmax, mutate, result);
  }
  return result;
}

RebalancedNs rebalance_permutation(const PrefixVector& v) {
  return rebalance_impl(v, false);
}

std::vector<int> ordered_sequence_draw(const RebalancedNs& r,
                                       const IndexPolicy& policy) {
  std::vector<int> out(r.n);
  for (std::uint64_t i = 0; i < r.n; ++i) {
    if (policy.index >= r.block_sizes[i]) {
      throw std::out_of_range(
          "ordered_sequence_draw: index " + std::to_string(policy.index) +
          " exceeds block " + std::to_string(i) + " of size " +
          std::to_string(r.block_sizes[i]));
    }
    // canonical layout: ones occupy the leading positions of each block
    out[i] = policy.index < r.block_ones[i] ? 1 : 0;
  }
  return out;
}

std::vector<int> ordered_sequence_draw(const RebalancedNs& r,
                                       const SeededUniformPolicy& policy) {
  std::mt19937_64 rng(policy.seed);
  std::vector<int> out(r.n);
  for (std::uint64_t i = 0; i < r.n; ++i) {
    // block sizes are powers of two, so masking is exactly uniform
    const std::uint64_t j = rng() & (r.block_sizes[i] - 1);
    out[i] = j < r.block_ones[i] ? 1 : 0;
  }
  return out;
}

}  // namespace normlab
