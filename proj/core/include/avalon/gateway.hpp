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


// Live sessions for humans and remote agents. Each session owns one game,
// binds every seat to either an in-process bot or a token holder, and keeps
// the full event log from which each viewer gets a filtered, cursor-
// addressed slice. Transport lives in gateway_http.hpp.

#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "avalon/agent.hpp"
#include "avalon/orchestrator.hpp"

namespace avalon::gateway {

inline constexpr int kWireSchemaVersion = 1;

/// A request failure with an HTTP status and a machine-readable code.
class GatewayError : public std::runtime_error {
 public:
  GatewayError(int status, std::string code, const std::string& message)
      : std::runtime_error(message), status_(status), code_(std::move(code)) {}
  int status() const { return status_; }
  const std::string& code() const { return code_; }

 private:
  int status_;
  std::string code_;
};

using Clock = std::chrono::steady_clock;

struct GatewayOptions {
  std::size_t max_sessions = 64;
  std::chrono::seconds session_ttl{3600};
  /// External seats that stay silent this long get the default action.
  std::optional<std::chrono::milliseconds> action_timeout;
  /// Finished games are written here as replays when set.
  std::optional<std::filesystem::path> replay_dir;
  OrchestratorOptions orchestrator;
  /// Injectable for tests.
  std::function<Clock::time_point()> now = [] { return Clock::now(); };
};

/// Seat kinds accepted in a seat plan.
inline constexpr const char* kExternalSeat = "external";

struct CreateRequest {
  GameConfig config;
  std::vector<std::string> seats;
  std::optional<std::uint64_t> seed;
  bool omniscient_spectator = false;
};

/// Validates a POST /games body. Throws GatewayError(400).
CreateRequest parse_create_request(const nlohmann::json& body);

struct Created {
  std::string game_id;
  std::map<Seat, std::string> seat_tokens;
  std::string spectator_token;
  std::optional<std::string> omniscient_token;
  bool started = false;
};

void to_json(nlohmann::json& j, const Created& c);

enum class ViewerKind { kSeat, kBlindSpectator, kOmniscientSpectator };

struct Viewer {
  ViewerKind kind = ViewerKind::kBlindSpectator;
  Seat seat = 0;
};

/// Whether `viewer` may see `e`. Seats and blind spectators see public
/// engine events; a seat also sees its own anomalies.
bool visible(const GameEvent& e, const Viewer& viewer);

struct StreamItem {
  std::uint64_t id = 0;
  nlohmann::json event;
};

struct EventSlice {
  std::vector<StreamItem> items;
  /// Set when the cursor was stale: a full resync for the viewer.
  std::optional<nlohmann::json> snapshot;
  /// Cursor to resume from (id of the newest log entry, or -1 if none).
  std::int64_t cursor = -1;
  bool finished = false;
};

class SessionManager {
 public:
  explicit SessionManager(GatewayOptions options = {});
  ~SessionManager();
  SessionManager(const SessionManager&) = delete;
  SessionManager& operator=(const SessionManager&) = delete;

  Created create_game(const CreateRequest& request);

  /// Marks an external seat joined; the game starts once all have joined.
  nlohmann::json join(const std::string& game, Seat seat,
                      const std::string& token);
  nlohmann::json observation(const std::string& game, Seat seat,
                             const std::string& token);
  nlohmann::json submit_action(const std::string& game, Seat seat,
                               const std::string& token,
                               const nlohmann::json& action);
  nlohmann::json submit_chat(const std::string& game, Seat seat,
                             const std::string& token, const std::string& text);

  /// Public game state for a spectator; roles only for omniscient tokens.
  nlohmann::json spectate(const std::string& game, const std::string& token);
  /// Unauthenticated lobby status.
  nlohmann::json status(const std::string& game);

  /// Resolves a token to a viewer for `game`; seat tokens must match `seat`.
  Viewer authorize(const std::string& game, std::optional<Seat> seat,
                   const std::string& token);

  /// Log entries after `since` visible to `viewer`. A cursor beyond the
  /// log yields a snapshot instead.
  EventSlice events(const std::string& game, const Viewer& viewer,
                    std::optional<std::int64_t> since);

  /// Blocks until the log grows past `cursor`, the game ends, or the
  /// timeout passes. Returns true when there is something new.
  bool wait(const std::string& game, std::int64_t cursor,
            std::chrono::milliseconds timeout);

  /// Applies action timeouts and evicts expired sessions.
  void tick();

  std::size_t session_count() const;
  /// Full unfiltered log, for tests and replay flushing.
  std::vector<GameEvent> log(const std::string& game) const;
  GameState state(const std::string& game) const;

 private:
  struct Session;
  std::shared_ptr<Session> find(const std::string& game) const;
  void check_seat_token(const Session& s, Seat seat,
                        const std::string& token) const;
  void start(Session& s);
  void apply(Session& s, Seat seat, const Action& action);
  void advance(Session& s);
  void finish_if_over(Session& s);
  void touch(Session& s);

  GatewayOptions options_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
};

/// 128 random bits as 32 lowercase hex characters.
std::string random_token();

}  // namespace avalon::gateway
