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

// Batch experiments: seat assignment by setting, per-game play, and the
// worker pool that writes replays and metrics.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "avalon/chat_client.hpp"
#include "avalon/llm_agent.hpp"
#include "avalon/metrics.hpp"
#include "avalon/orchestrator.hpp"
#include "avalon/replay.hpp"

namespace avalon {

enum class Setting {
  kBaseline,   // every seat naive
  kAssassin,   // a language model plays the Assassin
  kServant,    // a language model plays the lowest-numbered Servant
  kMultiLlm,   // every seat is a language model
  kCustom,     // seat kinds listed explicitly
};

std::string_view setting_key(Setting setting);
std::optional<Setting> parse_setting_key(std::string_view key);

class RunError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class ClientUse { kActor, kParser };

/// Builds chat clients for a seat. Returning null for the parser disables
/// the separate parsing call.
using ClientFactory = std::function<std::shared_ptr<ChatClient>(
    std::uint64_t game_index, Seat seat, ClientUse use)>;

struct RunSpec {
  GameConfig config = preset(5);
  Setting setting = Setting::kBaseline;
  /// Per-seat kinds ("naive" or "llm") for the custom setting.
  std::vector<std::string> seats;
  long games = 0;
  std::uint64_t base_seed = 0;
  int parallelism = 1;
  std::optional<std::filesystem::path> out_dir;

  EndpointConfig llm;
  /// Endpoint for the parsing model; defaults to `llm`.
  std::optional<EndpointConfig> parser;
  /// Overrides the HTTP clients, mostly for tests.
  ClientFactory client_factory;

  /// Naive seats speak through a language model when discussion is on.
  bool naive_dialogue = false;
  bool record_timing = false;
  bool sealed = false;
  OrchestratorOptions orchestrator;
  /// A game with more anomalies than this is aborted.
  int max_anomalies = 20;
  LlmAgentOptions llm_options;
  std::optional<std::filesystem::path> prompt_dir;
  /// When set, the loaded prompt bundle must hash to this value.
  std::optional<std::string> prompt_sha256;

  void validate() const;
};

void to_json(nlohmann::json& j, const RunSpec& spec);
void from_json(const nlohmann::json& j, RunSpec& spec);

/// Seat kinds for one game once roles are known.
std::vector<std::string> seat_kinds(const RunSpec& spec,
                                    const std::vector<Role>& roles);

/// Plays game `index` of the batch. Agent failures abort the game; a
/// missing or refused credential propagates as CredentialError.
GameRecord play_game(const RunSpec& spec, std::uint64_t index,
                     const PromptBundle& bundle = PromptBundle::builtin());

struct BatchResult {
  BatchMetrics metrics;
  std::vector<GameRecord> records;
};

/// Which probes count toward deduction accuracy for a setting.
MetricOptions metric_options(std::string_view setting);

/// Runs every game, persisting replays under out_dir/games as they finish,
/// then metrics.json and run.json.
BatchResult run_batch(const RunSpec& spec);

/// Reads every replay under dir/games (or dir itself) in file-name order.
std::vector<GameRecord> load_records(const std::filesystem::path& dir);

}  // namespace avalon
