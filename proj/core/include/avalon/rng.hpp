// Copyright 2026 The Avalon Arena Authors
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

#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace avalon {

// Seeds and streams are defined bit-for-bit (splitmix64 for derivation, PCG32
// XSH-RR for generation) so that logs can be reproduced from any language.
// Nothing here goes through <random> distributions, whose output is
// implementation-defined.

/// One splitmix64 step starting from `state`; returns the mixed output.
std::uint64_t splitmix64(std::uint64_t state);

/// Purpose tags keep streams drawn for different jobs independent.
enum class StreamPurpose : std::uint64_t {
  kGame = 0x67616d65,      // "game"
  kRoles = 0x726f6c65,     // "role"
  kPolicy = 0x706f6c69,    // "poli"
  kDefault = 0x64666c74,   // "dflt"
  kFuzz = 0x66757a7a,      // "fuzz"
};

/// Per-game seed: splitmix64 chained over (base_seed, game_index).
std::uint64_t game_seed(std::uint64_t base_seed, std::uint64_t game_index);

/// Seed for one stream inside a game: chained over (game_seed, seat, purpose).
std::uint64_t stream_seed(std::uint64_t game_seed, std::uint64_t seat,
                          StreamPurpose purpose);

class Pcg32 {
 public:
  Pcg32() : Pcg32(0x853c49e6748fea9bULL, 0xda3e39cb94b95bdbULL) {}
  Pcg32(std::uint64_t init_state, std::uint64_t init_seq);

  /// Builds a generator whose state and sequence both come from `seed`.
  static Pcg32 from_seed(std::uint64_t seed);

  std::uint32_t next_u32();

  /// Unbiased integer in [0, bound). `bound` must be positive.
  std::uint32_t uniform(std::uint32_t bound);

  /// Uniform double in [0, 1) with 32 bits of resolution.
  double unit();

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = uniform(static_cast<std::uint32_t>(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  template <typename T>
  const T& pick(const std::vector<T>& items) {
    return items[uniform(static_cast<std::uint32_t>(items.size()))];
  }

  bool operator==(const Pcg32&) const = default;

 private:
  std::uint64_t state_ = 0;
  std::uint64_t inc_ = 0;
};

}  // namespace avalon
