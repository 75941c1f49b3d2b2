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

// Possibility-set belief tracking for players who only see mission outcomes.
//
// A possibility is one complete Good/Evil assignment consistent with the Evil
// count and whatever the owner knows for certain. Weights start uniform; a
// quest with k fails eliminates every possibility that puts fewer than k Evil
// players on that team, and the survivors are renormalized. Weights are exact
// rationals, so ties between teams compare exactly.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include <boost/rational.hpp>

#include "avalon/config.hpp"
#include "avalon/team.hpp"

namespace avalon {

using Probability = boost::rational<std::int64_t>;

/// One side assignment, stored as the set of Evil seats.
struct Possibility {
  Team evil;

  Side side(Seat seat) const {
    return evil.contains(seat) ? Side::kEvil : Side::kGood;
  }
  bool all_good(Team team) const { return (team & evil).empty(); }
  int evil_on(Team team) const { return (team & evil).size(); }
  bool operator==(const Possibility&) const = default;
};

/// Raised when every possibility has been eliminated: the observed fails are
/// impossible under the assumption that Good players always pass.
class BeliefInconsistency : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BeliefState {
  int num_players = 0;
  int num_evil = 0;
  Seat owner = 0;
  std::map<Seat, Side> known;
  /// The set B. Eliminated entries stay in the list with weight 0.
  std::vector<Possibility> possibilities;
  /// Parallel weights P_b.
  std::vector<Probability> weights;

  std::size_t surviving() const;
  bool operator==(const BeliefState&) const = default;
};

struct TeamPreference {
  /// Probability that every member is Good.
  Probability x;
  /// 1 iff the team is a subset or superset of the last successful team.
  int y = 0;

  bool operator==(const TeamPreference&) const = default;
  bool operator<(const TeamPreference& o) const {
    return x < o.x || (x == o.x && y < o.y);
  }
};

/// Enumerates every assignment matching the counts and `known`.
/// Throws std::invalid_argument when `known` is contradictory.
BeliefState init_beliefs(int num_players, int num_evil,
                         const std::map<Seat, Side>& known, Seat owner = 0);

/// Throws BeliefInconsistency if no possibility survives.
BeliefState update_on_quest(const BeliefState& belief, Team team, int fails);

TeamPreference team_preference(const BeliefState& belief, Team team,
                               const std::optional<Team>& last_success);

/// Every team of `team_size` achieving the lexicographic maximum, in
/// lexicographic seat order. Never empty for a valid size.
std::vector<Team> best_teams(const BeliefState& belief, int team_size,
                             const std::optional<Team>& last_success);

/// Largest x over all teams of the given size.
Probability max_clean_probability(const BeliefState& belief, int team_size);

/// Probability that `seat` is Good.
double posterior_good(const BeliefState& belief, Seat seat);

/// Exact variant of posterior_good.
Probability posterior_good_exact(const BeliefState& belief, Seat seat);

}  // namespace avalon
