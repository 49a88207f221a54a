// Copyright 2026 The seprand Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/// \file
/// Portable, bit-reproducible randomness and hashing. Run logs must replay
/// identically across platforms and standard libraries, so nothing here
/// goes through <random> distributions.

#ifndef SEPRAND_RNG_HPP_
#define SEPRAND_RNG_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace seprand {

inline constexpr std::uint64_t kFnvOffsetBasis = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

/// Incremental FNV-1a 64.
class Fnv1a64 {
 public:
  Fnv1a64& update(std::string_view bytes) {
    for (unsigned char c : bytes) {
      state_ ^= c;
      state_ *= kFnvPrime;
    }
    return *this;
  }
  Fnv1a64& update_byte(unsigned char c) {
    state_ ^= c;
    state_ *= kFnvPrime;
    return *this;
  }
  std::uint64_t digest() const { return state_; }

 private:
  std::uint64_t state_ = kFnvOffsetBasis;
};

inline std::uint64_t fnv1a64(std::string_view bytes) {
  return Fnv1a64().update(bytes).digest();
}

/// 16 lowercase hex digits.
std::string hex64(std::uint64_t value);

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();

 private:
  std::uint64_t state_;
};

/// xoshiro256** seeded by four successive splitmix64 outputs.
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed);

  std::uint64_t next();
  /// Uniform integer in [0, bound) by rejection; bound must be > 0.
  std::uint64_t uniform(std::uint64_t bound);

 private:
  std::array<std::uint64_t, 4> s_;
};

/// Independent sub-seed for stream `index` under `seed`. Used so that
/// candidate i of a run depends only on (seed, i).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// `count` distinct indices from [0, population) via a partial
/// Fisher-Yates shuffle, in draw order.
std::vector<std::size_t> sample_without_replacement(Xoshiro256& rng,
                                                    std::size_t population,
                                                    std::size_t count);

}  // namespace seprand

#endif  // SEPRAND_RNG_HPP_
