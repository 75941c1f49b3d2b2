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

#include "avalon/config.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace avalon {

std::string_view role_name(Role role) {
  switch (role) {
    case Role::kMerlin: return "Merlin";
    case Role::kServant: return "Servant";
    case Role::kMinion: return "Minion";
    case Role::kAssassin: return "Assassin";
  }
  return "?";
}

std::string_view side_name(Side side) {
  return side == Side::kGood ? "Good" : "Evil";
}

std::string_view role_key(Role role) {
  switch (role) {
    case Role::kMerlin: return "merlin";
    case Role::kServant: return "servant";
    case Role::kMinion: return "minion";
    case Role::kAssassin: return "assassin";
  }
  return "?";
}

std::optional<Role> parse_role_key(std::string_view key) {
  for (Role r : {Role::kMerlin, Role::kServant, Role::kMinion,
                 Role::kAssassin}) {
    if (role_key(r) == key) return r;
  }
  return std::nullopt;
}

int GameConfig::num_evil() const {
  return static_cast<int>(std::count_if(roles.begin(), roles.end(), [](Role r) {
    return side_of(r) == Side::kEvil;
  }));
}

void GameConfig::validate() const {
  if (num_players < 2 || num_players > kMaxPlayers) {
    throw ConfigError(fmt::format("num_players must be in [2, {}], got {}",
                                  kMaxPlayers, num_players));
  }
  if (static_cast<int>(roles.size()) != num_players) {
    throw ConfigError(fmt::format("{} roles listed for {} players",
                                  roles.size(), num_players));
  }
  if (std::count(roles.begin(), roles.end(), Role::kMerlin) != 1) {
    throw ConfigError("exactly one Merlin is required");
  }
  if (std::count(roles.begin(), roles.end(), Role::kAssassin) != 1) {
    throw ConfigError("exactly one Assassin is required");
  }
  if (num_good() <= num_evil()) {
    throw ConfigError(fmt::format(
        "Good must outnumber Evil ({} Good vs {} Evil)", num_good(),
        num_evil()));
  }
  for (int m = 0; m < kNumMissions; ++m) {
    if (mission_team_sizes[m] < 1 || mission_team_sizes[m] > num_players) {
      throw ConfigError(fmt::format("mission {} team size {} out of range", m,
                                    mission_team_sizes[m]));
    }
    if (fails_required[m] < 1 || fails_required[m] > mission_team_sizes[m]) {
      throw ConfigError(fmt::format("mission {} fail threshold {} out of range",
                                    m, fails_required[m]));
    }
  }
  if (max_consecutive_rejections != 4) {
    throw ConfigError("max_consecutive_rejections must be 4");
  }
  if (discussion_sentence_limit < 0) {
    throw ConfigError("discussion_sentence_limit must be >= 0");
  }
}

GameConfig preset(int num_players) {
  GameConfig c;
  c.num_players = num_players;
  int evil = 0;
  switch (num_players) {
    case 5:
      c.mission_team_sizes = {2, 3, 2, 3, 3};
      c.fails_required = {1, 1, 1, 1, 1};
      evil = 2;
      break;
    case 6:
      c.mission_team_sizes = {2, 3, 4, 3, 4};
      c.fails_required = {1, 1, 1, 1, 1};
      evil = 2;
      break;
    case 7:
      c.mission_team_sizes = {2, 3, 3, 4, 4};
      c.fails_required = {1, 1, 1, 2, 1};
      evil = 3;
      break;
    case 8:
    case 9:
    case 10:
      c.mission_team_sizes = {3, 4, 4, 5, 5};
      c.fails_required = {1, 1, 1, 2, 1};
      evil = num_players == 10 ? 4 : 3;
      break;
    default:
      throw ConfigError(
          fmt::format("no preset for {} players (5..10)", num_players));
  }
  c.roles.push_back(Role::kMerlin);
  for (int i = 1; i < num_players - evil; ++i) c.roles.push_back(Role::kServant);
  for (int i = 1; i < evil; ++i) c.roles.push_back(Role::kMinion);
  c.roles.push_back(Role::kAssassin);
  return c;
}

}  // namespace avalon
