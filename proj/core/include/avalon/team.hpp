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

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace avalon {

/// Seat index, 0-based.
using Seat = int;

inline constexpr int kMaxPlayers = 10;

/// A set of seats, stored as a bitmask. Iteration is always ascending.
class Team {
 public:
  constexpr Team() = default;
  constexpr explicit Team(std::uint32_t bits) : bits_(bits) {}
  Team(std::initializer_list<Seat> seats);
  static Team from_seats(const std::vector<Seat>& seats);
  /// Every seat in [0, num_players).
  static constexpr Team everyone(int num_players) {
    return Team((1u << num_players) - 1u);
  }

  constexpr std::uint32_t bits() const { return bits_; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool contains(Seat seat) const {
    return seat >= 0 && seat < 32 && ((bits_ >> seat) & 1u) != 0;
  }

  constexpr Team with(Seat seat) const { return Team(bits_ | (1u << seat)); }
  constexpr Team without(Seat seat) const {
    return Team(bits_ & ~(1u << seat));
  }
  constexpr Team operator&(Team other) const {
    return Team(bits_ & other.bits_);
  }
  constexpr Team operator|(Team other) const {
    return Team(bits_ | other.bits_);
  }
  constexpr bool subset_of(Team other) const {
    return (bits_ & ~other.bits_) == 0;
  }
  constexpr bool superset_of(Team other) const {
    return other.subset_of(*this);
  }

  std::vector<Seat> seats() const;

  /// Python-style list, e.g. "[1, 3]".
  std::string to_string() const;

  constexpr bool operator==(const Team&) const = default;

  /// Orders teams the way their sorted seat lists compare.
  std::strong_ordering operator<=>(const Team& other) const;

 private:
  std::uint32_t bits_ = 0;
};

/// All subsets of {0..num_players-1} of the given size, in lexicographic order
/// of their sorted seat lists.
std::vector<Team> all_teams(int num_players, int size);

}  // namespace avalon
