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

#include "avalon/rng.hpp"

namespace avalon {

std::uint64_t splitmix64(std::uint64_t state) {
  std::uint64_t z = state + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t game_seed(std::uint64_t base_seed, std::uint64_t game_index) {
  return splitmix64(splitmix64(base_seed) ^ game_index);
}

std::uint64_t stream_seed(std::uint64_t game_seed, std::uint64_t seat,
                          StreamPurpose purpose) {
  const auto h = splitmix64(splitmix64(game_seed) ^ seat);
  return splitmix64(h ^ static_cast<std::uint64_t>(purpose));
}

Pcg32::Pcg32(std::uint64_t init_state, std::uint64_t init_seq)
    : state_(0), inc_((init_seq << 1u) | 1u) {
  next_u32();
  state_ += init_state;
  next_u32();
}

Pcg32 Pcg32::from_seed(std::uint64_t seed) {
  return Pcg32(seed, splitmix64(seed));
}

std::uint32_t Pcg32::next_u32() {
  const std::uint64_t old = state_;
  state_ = old * 6364136223846793005ULL + inc_;
  const auto xorshifted =
      static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
  const auto rot = static_cast<std::uint32_t>(old >> 59u);
  return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
}

std::uint32_t Pcg32::uniform(std::uint32_t bound) {
  // Rejection below 2^32 mod bound, as in pcg32_boundedrand_r.
  const std::uint32_t threshold = (0u - bound) % bound;
  for (;;) {
    const std::uint32_t r = next_u32();
    if (r >= threshold) return r % bound;
  }
}

double Pcg32::unit() { return next_u32() * (1.0 / 4294967296.0); }

}  // namespace avalon
