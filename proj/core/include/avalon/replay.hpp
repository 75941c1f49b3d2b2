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

// Game records and their JSON-lines replay files.
//
// A replay file holds one header object followed by one object per event,
// each on its own line. Writing is deterministic: the same record always
// produces the same bytes, so wall-clock timing is only stored on request.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "avalon/game.hpp"

namespace avalon {

inline constexpr int kReplayFormatVersion = 1;

class ReplayError : public std::runtime_error {
 public:
  ReplayError(std::size_t line, const std::string& message);
  /// 1-based line of the first bad entry; 0 for file-level problems.
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct GameRecord {
  int format_version = kReplayFormatVersion;
  GameConfig config;
  std::uint64_t base_seed = 0;
  std::uint64_t game_index = 0;
  std::uint64_t seed = 0;
  /// Seat roles; absent in sealed replays.
  std::optional<std::vector<Role>> roles;
  std::vector<std::string> agent_kinds;
  std::string setting;
  /// SHA-256 of the prompt bundle when any seat used a language model.
  std::optional<std::string> prompt_sha256;
  std::optional<GameResult> result;
  bool aborted = false;
  std::string abort_reason;
  std::optional<double> wall_ms;
  std::vector<GameEvent> events;

  /// Believed-sides probes in event order.
  std::vector<event::SidesProbed> probes() const;

  bool operator==(const GameRecord&) const = default;
};

/// Serializes a record. `sealed` drops the role assignment.
std::string to_jsonl(const GameRecord& record, bool sealed = false);
/// Exact inverse of to_jsonl. Throws ReplayError naming the bad line.
GameRecord from_jsonl(const std::string& text);

void write_replay(const GameRecord& record, const std::filesystem::path& path,
                  bool sealed = false);
GameRecord read_replay(const std::filesystem::path& path);

/// Human-readable rendering of a game for the command line.
std::string pretty_print(const GameRecord& record);

}  // namespace avalon
