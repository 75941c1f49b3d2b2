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

#include "avalon/team.hpp"

#include <algorithm>
#include <stdexcept>

namespace avalon {

Team::Team(std::initializer_list<Seat> seats) {
  for (Seat s : seats) {
    if (s < 0 || s >= 32) throw std::out_of_range("seat out of range");
    bits_ |= 1u << s;
  }
}

Team Team::from_seats(const std::vector<Seat>& seats) {
  Team t;
  for (Seat s : seats) {
    if (s < 0 || s >= 32) throw std::out_of_range("seat out of range");
    t = t.with(s);
  }
  return t;
}

std::vector<Seat> Team::seats() const {
  std::vector<Seat> out;
  out.reserve(size());
  for (std::uint32_t b = bits_; b != 0; b &= b - 1) {
    out.push_back(std::countr_zero(b));
  }
  return out;
}

std::string Team::to_string() const {
  std::string out = "[";
  bool first = true;
  for (Seat s : seats()) {
    if (!first) out += ", ";
    out += std::to_string(s);
    first = false;
  }
  out += "]";
  return out;
}

std::strong_ordering Team::operator<=>(const Team& other) const {
  const auto a = seats();
  const auto b = other.seats();
  return std::lexicographical_compare_three_way(a.begin(), a.end(), b.begin(),
                                                b.end());
}

std::vector<Team> all_teams(int num_players, int size) {
  std::vector<Team> out;
  if (size < 0 || size > num_players) return out;
  std::vector<Seat> idx(size);
  for (int i = 0; i < size; ++i) idx[i] = i;
  for (;;) {
    out.push_back(Team::from_seats(idx));
    int i = size - 1;
    while (i >= 0 && idx[i] == num_players - size + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

}  // namespace avalon
