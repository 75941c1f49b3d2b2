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

// Turning free text from a language model into engine actions.
//
// Two layers: the exact "Answer: ..." line the parse prompts ask for, and a
// deterministic fallback that reads the player's own prose. Both validate
// seat ranges and team sizes, so a result is always legal in shape.

#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "avalon/game.hpp"

namespace avalon {

struct ParseContext {
  Phase phase = Phase::kTeamSelection;
  int num_players = 5;
  /// Required size when proposing.
  int team_size = 0;
  /// The speaking seat, used for "myself" and self-target checks.
  Seat seat = 0;
};

/// Reads "Answer: [ids]", "Answer: Yes|No" or "Answer: [id]".
std::optional<Action> parse_answer_line(std::string_view text,
                                        const ParseContext& ctx);

/// Heuristic reading of the player's raw reasoning.
std::optional<Action> fallback_parse(std::string_view raw,
                                     const ParseContext& ctx);

/// Reads "Answer: {0: p0, 1: p1, ...}". Missing seats become 0.5 and values
/// are clamped to [0, 1]. Empty if no score is found.
std::optional<std::vector<double>> parse_probe_answer(std::string_view text,
                                                      int num_players);

/// Reads "Player k: p" lines (or a brace dictionary) from a free reply.
std::optional<std::vector<double>> fallback_probe(std::string_view raw,
                                                  int num_players);

/// Splits prose into sentences at '.', '!', '?' and line breaks.
std::vector<std::string> split_sentences(std::string_view text);

}  // namespace avalon
