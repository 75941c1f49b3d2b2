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

#include "avalon/beliefs.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace avalon {

std::size_t BeliefState::surviving() const {
  return static_cast<std::size_t>(
      std::count_if(weights.begin(), weights.end(),
                    [](const Probability& w) { return w.numerator() != 0; }));
}

BeliefState init_beliefs(int num_players, int num_evil,
                         const std::map<Seat, Side>& known, Seat owner) {
  if (num_players < 1 || num_players > kMaxPlayers || num_evil < 0 ||
      num_evil > num_players) {
    throw std::invalid_argument(
        fmt::format("bad counts: {} players, {} evil", num_players, num_evil));
  }
  Team known_evil;
  Team known_good;
  for (const auto& [seat, side] : known) {
    if (seat < 0 || seat >= num_players) {
      throw std::invalid_argument(fmt::format("known seat {} out of range", seat));
    }
    Team& bucket = side == Side::kEvil ? known_evil : known_good;
    bucket = bucket.with(seat);
  }
  if (known_evil.size() > num_evil ||
      known_good.size() > num_players - num_evil) {
    throw std::invalid_argument("known sides contradict the Evil count");
  }

  BeliefState b;
  b.num_players = num_players;
  b.num_evil = num_evil;
  b.owner = owner;
  b.known = known;
  for (Team evil : all_teams(num_players, num_evil)) {
    if (!known_evil.subset_of(evil)) continue;
    if (!(evil & known_good).empty()) continue;
    b.possibilities.push_back(Possibility{evil});
  }
  const auto n = static_cast<std::int64_t>(b.possibilities.size());
  b.weights.assign(b.possibilities.size(), Probability(1, n));
  return b;
}

BeliefState update_on_quest(const BeliefState& belief, Team team, int fails) {
  if (fails < 0 || fails > team.size()) {
    throw std::invalid_argument(
        fmt::format("{} fails on a team of {}", fails, team.size()));
  }
  BeliefState out = belief;
  if (fails == 0) return out;
  std::int64_t survivors = 0;
  for (std::size_t i = 0; i < out.possibilities.size(); ++i) {
    if (out.weights[i].numerator() == 0) continue;
    if (out.possibilities[i].evil_on(team) < fails) {
      out.weights[i] = 0;
    } else {
      ++survivors;
    }
  }
  if (survivors == 0) {
    throw BeliefInconsistency(fmt::format(
        "{} fails on {} eliminated every possibility", fails, team.to_string()));
  }
  // Survivors were equally likely before and stay so after.
  for (auto& w : out.weights) {
    if (w.numerator() != 0) w = Probability(1, survivors);
  }
  return out;
}

TeamPreference team_preference(const BeliefState& belief, Team team,
                               const std::optional<Team>& last_success) {
  TeamPreference p;
  if (last_success &&
      (team.subset_of(*last_success) || team.superset_of(*last_success))) {
    p.y = 1;
  }
  for (std::size_t i = 0; i < belief.possibilities.size(); ++i) {
    if (belief.weights[i].numerator() != 0 && belief.possibilities[i].all_good(team)) {
      p.x += belief.weights[i];
    }
  }
  return p;
}

std::vector<Team> best_teams(const BeliefState& belief, int team_size,
                             const std::optional<Team>& last_success) {
  std::vector<Team> best;
  std::optional<TeamPreference> top;
  for (Team t : all_teams(belief.num_players, team_size)) {
    const auto p = team_preference(belief, t, last_success);
    if (!top || *top < p) {
      top = p;
      best.clear();
    }
    if (*top == p) best.push_back(t);
  }
  return best;
}

Probability max_clean_probability(const BeliefState& belief, int team_size) {
  Probability best(0);
  for (Team t : all_teams(belief.num_players, team_size)) {
    best = std::max(best, team_preference(belief, t, std::nullopt).x);
  }
  return best;
}

Probability posterior_good_exact(const BeliefState& belief, Seat seat) {
  Probability p(0);
  for (std::size_t i = 0; i < belief.possibilities.size(); ++i) {
    if (belief.weights[i].numerator() != 0 &&
        belief.possibilities[i].side(seat) == Side::kGood) {
      p += belief.weights[i];
    }
  }
  return p;
}

double posterior_good(const BeliefState& belief, Seat seat) {
  return boost::rational_cast<double>(posterior_good_exact(belief, seat));
}

}  // namespace avalon
