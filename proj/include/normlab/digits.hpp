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
#include <map>
#include <memory>
#include <stdexcept>
#include <string>

#include "normlab/bitbuf.hpp"

namespace normlab {

/// Thrown when a finite source cannot supply the requested digits.
class InsufficientDigitsError : public std::runtime_error {
 public:
  InsufficientDigitsError(std::uint64_t required, std::uint64_t available)
      : std::runtime_error("insufficient digits: required " +
                           std::to_string(required) + ", available " +
                           std::to_string(available)),
        required_(required),
        available_(available) {}
  std::uint64_t required() const { return required_; }
  std::uint64_t available() const { return available_; }

 private:
  std::uint64_t required_;
  std::uint64_t available_;
};

/// What a source is, in serializable form. Parameters are kept as strings
/// so the sidecar and the cache key stay stable.
struct SourceSpec {
  std::string kind;  // sqrt | rational | champernowne2 | copeland_erdos2 |
                     // file | ones | alternating
  std::map<std::string, std::string> params;

  std::string describe() const;
  /// Filesystem-safe cache key for a given digit count.
  std::string cache_key(std::uint64_t bits) const;
};

/// Stateful sequential generator of binary digits, starting at the most
/// significant 1 of the constant. Exclusive use by one execution context
/// at a time; safe to hand off between calls.
class DigitSource {
 public:
  virtual ~DigitSource() = default;

  const SourceSpec& spec() const { return spec_; }
  std::uint64_t position() const { return position_; }

  /// Appends exactly `count` further digits to `out`.
  void emit(BitBuffer& out, std::uint64_t count) {
    do_emit(out, count);
    position_ += count;
  }

 protected:
  explicit DigitSource(SourceSpec spec) : spec_(std::move(spec)) {}
  virtual void do_emit(BitBuffer& out, std::uint64_t count) = 0;

 private:
  SourceSpec spec_;
  std::uint64_t position_ = 0;
};

// Factories. Each validates its preconditions and throws
// std::invalid_argument on rejection.

/// Digits of sqrt(m), m >= 2 and not a perfect square. Exact big-integer
/// Newton isqrt of m*4^t, scale doubled on demand, prior root reused.
std::unique_ptr<DigitSource> make_sqrt_source(std::uint64_t m);

/// Digits of p/q by exact long division, p, q >= 1. Terminating (dyadic)
/// expansions continue with zeros.
std::unique_ptr<DigitSource> make_rational_source(std::uint64_t p,
                                                  std::uint64_t q);

/// Concatenation of the positive integers in binary: 1 10 11 100 101 ...
std::unique_ptr<DigitSource> make_champernowne2_source();

/// Concatenation of the primes in binary: 10 11 101 111 1011 ...
/// Primes come from a segmented sieve extended geometrically.
std::unique_ptr<DigitSource> make_copeland_erdos2_source();

/// Replays a .nbits file. Finite; throws InsufficientDigitsError when
/// asked past the end.
std::unique_ptr<DigitSource> make_file_source(const std::filesystem::path& p);

/// Replays an in-memory buffer (same finiteness rules as a file source).
std::unique_ptr<DigitSource> make_buffer_source(BitBuffer bits,
                                                std::string label = "buffer");

std::unique_ptr<DigitSource> make_ones_source();
std::unique_ptr<DigitSource> make_alternating_source();

/// Builds a source from its spec (the inverse of DigitSource::spec()).
std::unique_ptr<DigitSource> make_source(const SourceSpec& spec);

}  // namespace normlab
