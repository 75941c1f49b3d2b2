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

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "avalon/team.hpp"

namespace avalon {

enum class Role { kMerlin, kServant, kMinion, kAssassin };
enum class Side { kGood, kEvil };

constexpr Side side_of(Role role) {
  return role == Role::kMerlin || role == Role::kServant ? Side::kGood
                                                         : Side::kEvil;
}

/// Display names as used in prompts: "Merlin", "Servant", ...
std::string_view role_name(Role role);
std::string_view side_name(Side side);
/// Lower-case wire names: "merlin", "servant", "minion", "assassin".
std::string_view role_key(Role role);
std::optional<Role> parse_role_key(std::string_view key);

inline constexpr int kNumMissions = 5;

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct GameConfig {
  int num_players = 5;
  /// Role multiset; the order is irrelevant, assignment to seats is drawn.
  std::vector<Role> roles;
  std::array<int, kNumMissions> mission_team_sizes{};
  /// Fail votes needed for each mission to fail.
  std::array<int, kNumMissions> fails_required{};
  int max_consecutive_rejections = 4;
  bool discussion_enabled = false;
  /// Sentences kept per utterance; 0 means unlimited.
  int discussion_sentence_limit = 2;
  bool reveal_vote_history_to_agents = false;

  int num_evil() const;
  int num_good() const { return num_players - num_evil(); }

  /// Throws ConfigError describing the first violated invariant.
  void validate() const;

  bool operator==(const GameConfig&) const = default;
};

/// Standard table for 5..10 players. Throws ConfigError outside that range.
GameConfig preset(int num_players);

}  // namespace avalon
