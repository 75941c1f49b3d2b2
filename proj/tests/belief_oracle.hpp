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


// Reference model for belief tests: enumerates side assignments directly as
// bitmasks and counts survivors, sharing no code with the library.

#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "avalon/beliefs.hpp"

namespace avalon::testing_oracle {

class BruteForce {
 public:
  BruteForce(int n, int evil, const std::map<Seat, Side>& known) : n_(n) {
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      if (std::popcount(mask) != evil) continue;
      bool ok = true;
      for (const auto& [seat, side] : known) {
        const bool is_evil = (mask >> seat) & 1u;
        if (is_evil != (side == Side::kEvil)) ok = false;
      }
      if (ok) worlds_.push_back(mask);
    }
  }

  bool consistent_after(Team team, int fails) const {
    for (auto w : worlds_) {
      if (std::popcount(w & team.bits()) >= fails) return true;
    }
    return false;
  }

  void observe(Team team, int fails) {
    std::vector<std::uint32_t> keep;
    for (auto w : worlds_) {
      if (std::popcount(w & team.bits()) >= fails) keep.push_back(w);
    }
    worlds_ = std::move(keep);
  }

  /// Fraction of surviving worlds with no Evil seat on `team`.
  Probability clean(Team team) const {
    std::int64_t hits = 0;
    for (auto w : worlds_) hits += (w & team.bits()) == 0;
    return Probability(hits, static_cast<std::int64_t>(worlds_.size()));
  }

  Probability good(Seat seat) const { return clean(Team{seat}); }

  std::size_t size() const { return worlds_.size(); }
  const std::vector<std::uint32_t>& worlds() const { return worlds_; }
  int players() const { return n_; }

 private:
  int n_;
  std::vector<std::uint32_t> worlds_;
};

}  // namespace avalon::testing_oracle
