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


#include "avalon/gateway.hpp"

#include <algorithm>

#include <fmt/format.h>
#include <openssl/crypto.h>
#include <openssl/rand.h>

#include "avalon/naive.hpp"
#include "avalon/random_agent.hpp"
#include "avalon/replay.hpp"
#include "avalon/rng.hpp"
#include "avalon/wire.hpp"

namespace avalon::gateway {

using nlohmann::json;

namespace {

void random_bytes(unsigned char* out, int n) {
  if (RAND_bytes(out, n) != 1) {
    throw GatewayError(500, "entropy_unavailable", "RAND_bytes failed");
  }
}

bool same_token(const std::string& a, const std::string& b) {
  return !a.empty() && a.size() == b.size() &&
         CRYPTO_memcmp(a.data(), b.data(), a.size()) == 0;
}

std::unique_ptr<Agent> make_bot(const std::string& kind, std::uint64_t seed,
                                Seat seat) {
  const auto s = stream_seed(seed, static_cast<std::uint64_t>(seat),
                             StreamPurpose::kPolicy);
  if (kind == "naive") return std::make_unique<NaiveAgent>(s);
  if (kind == "random") return std::make_unique<RandomAgent>(s);
  return nullptr;
}

int rule_status(RuleCode code) {
  switch (code) {
    case RuleCode::kInvalidSeat:
    case RuleCode::kIllegalTeamSize:
    case RuleCode::kIllegalTarget:
      return 400;
    default:
      return 409;
  }
}

json wire_event(const GameEvent& e, std::uint64_t id) {
  json j = e;
  j["seq"] = id;
  return j;
}

}  // namespace

std::string random_token() {
  unsigned char bytes[16];
  random_bytes(bytes, sizeof bytes);
  std::string out;
  for (unsigned char b : bytes) out += fmt::format("{:02x}", b);
  return out;
}

CreateRequest parse_create_request(const json& body) {
  CreateRequest r;
  try {
    if (!body.is_object()) throw GatewayError(400, "invalid_request", "body must be an object");
    if (body.contains("config")) {
      r.config = body.at("config").get<GameConfig>();
    } else {
      r.config = preset(body.value("num_players", 5));
    }
    r.config.validate();
    r.seats = body.at("seats").get<std::vector<std::string>>();
    if (body.contains("seed")) r.seed = body.at("seed").get<std::uint64_t>();
    r.omniscient_spectator = body.value("omniscient_spectator", false);
  } catch (const GatewayError&) {
    throw;
  } catch (const std::exception& e) {
    throw GatewayError(400, "invalid_config", e.what());
  }
  if (static_cast<int>(r.seats.size()) != r.config.num_players) {
    throw GatewayError(400, "invalid_config",
                       fmt::format("seat plan has {} entries for {} players",
                                   r.seats.size(), r.config.num_players));
  }
  for (const auto& k : r.seats) {
    if (k != kExternalSeat && k != "naive" && k != "random") {
      throw GatewayError(400, "invalid_config", "unknown seat kind " + k);
    }
  }
  return r;
}

void to_json(json& j, const Created& c) {
  json tokens = json::object();
  for (const auto& [seat, token] : c.seat_tokens) tokens[std::to_string(seat)] = token;
  j = json{{"game_id", c.game_id},
           {"seat_tokens", tokens},
           {"spectator_token", c.spectator_token},
           {"started", c.started},
           {"schema_version", kWireSchemaVersion}};
  if (c.omniscient_token) j["omniscient_token"] = *c.omniscient_token;
}

bool visible(const GameEvent& e, const Viewer& viewer) {
  if (viewer.kind == ViewerKind::kOmniscientSpectator) return true;
  if (const auto* a = std::get_if<event::AgentAnomaly>(&e)) {
    return viewer.kind == ViewerKind::kSeat && a->seat == viewer.seat;
  }
  return is_engine_event(e);
}

struct SessionManager::Session {
  std::mutex mu;
  std::condition_variable cv;
  std::string id;
  GameState state;
  std::vector<GameEvent> log;
  std::vector<std::string> kinds;
  std::vector<std::unique_ptr<Agent>> bots;
  std::vector<Agent*> agents;
  std::map<Seat, std::string> tokens;
  std::vector<bool> joined;
  std::string spectator_token;
  std::optional<std::string> omniscient_token;
  bool started = false;
  bool flushed = false;
  Clock::time_point created;
  Clock::time_point updated;
  Clock::time_point waiting_since;
};

SessionManager::SessionManager(GatewayOptions options)
    : options_(std::move(options)) {}

SessionManager::~SessionManager() = default;

std::shared_ptr<SessionManager::Session> SessionManager::find(
    const std::string& game) const {
  std::lock_guard lock(mu_);
  auto it = sessions_.find(game);
  if (it == sessions_.end()) {
    throw GatewayError(404, "not_found", "no game " + game);
  }
  return it->second;
}

std::size_t SessionManager::session_count() const {
  std::lock_guard lock(mu_);
  return sessions_.size();
}

void SessionManager::touch(Session& s) { s.updated = options_.now(); }

Created SessionManager::create_game(const CreateRequest& request) {
  tick();
  {
    std::lock_guard lock(mu_);
    if (sessions_.size() >= options_.max_sessions) {
      throw GatewayError(503, "session_limit", "too many live sessions");
    }
  }
  auto s = std::make_shared<Session>();
  std::uint64_t seed = 0;
  if (request.seed) {
    seed = *request.seed;
  } else {
    random_bytes(reinterpret_cast<unsigned char*>(&seed), sizeof seed);
  }
  Transition t;
  try {
    t = new_game(request.config, seed);
  } catch (const std::exception& e) {
    throw GatewayError(400, "invalid_config", e.what());
  }
  s->id = random_token().substr(0, 16);
  s->state = std::move(t.state);
  s->log = std::move(t.events);
  s->kinds = request.seats;
  s->joined.assign(request.seats.size(), false);
  s->created = s->updated = s->waiting_since = options_.now();

  Created out;
  out.game_id = s->id;
  for (Seat seat = 0; seat < static_cast<Seat>(request.seats.size()); ++seat) {
    auto bot = make_bot(request.seats[seat], seed, seat);
    s->agents.push_back(bot.get());
    s->bots.push_back(std::move(bot));
    if (request.seats[seat] == kExternalSeat) {
      s->tokens[seat] = out.seat_tokens[seat] = random_token();
    } else {
      s->joined[seat] = true;
    }
  }
  s->spectator_token = out.spectator_token = random_token();
  if (request.omniscient_spectator) {
    s->omniscient_token = out.omniscient_token = random_token();
  }
  {
    std::lock_guard lock(s->mu);
    if (out.seat_tokens.empty()) start(*s);
    out.started = s->started;
  }
  std::lock_guard lock(mu_);
  sessions_[s->id] = s;
  return out;
}

void SessionManager::check_seat_token(const Session& s, Seat seat,
                                      const std::string& token) const {
  if (seat < 0 || seat >= s.state.config.num_players) {
    throw GatewayError(404, "not_found", fmt::format("no seat {}", seat));
  }
  auto it = s.tokens.find(seat);
  if (it == s.tokens.end() || !same_token(it->second, token)) {
    throw GatewayError(401, "unauthorized", "token does not hold this seat");
  }
}

Viewer SessionManager::authorize(const std::string& game,
                                 std::optional<Seat> seat,
                                 const std::string& token) {
  auto s = find(game);
  std::lock_guard lock(s->mu);
  if (seat) {
    check_seat_token(*s, *seat, token);
    return Viewer{ViewerKind::kSeat, *seat};
  }
  if (same_token(s->spectator_token, token)) return Viewer{};
  if (s->omniscient_token && same_token(*s->omniscient_token, token)) {
    return Viewer{ViewerKind::kOmniscientSpectator, 0};
  }
  throw GatewayError(401, "unauthorized", "not a spectator token for this game");
}

void SessionManager::start(Session& s) {
  for (Seat seat = 0; seat < static_cast<Seat>(s.agents.size()); ++seat) {
    if (s.agents[seat]) s.agents[seat]->start(make_observation(s.state, seat));
  }
  for (const GameEvent& e : s.log) {
    if (!is_engine_event(e)) continue;
    for (Agent* a : s.agents) {
      if (a) a->on_event(e);
    }
  }
  s.started = true;
  s.waiting_since = options_.now();
  advance(s);
}

void SessionManager::apply(Session& s, Seat seat, const Action& action) {
  Transition t = apply_action(s.state, seat, action);
  s.state = std::move(t.state);
  dispatch_events(s.state, t.events, s.agents);
  const bool decided = missions_decided(s.state, t.events);
  s.log.insert(s.log.end(), t.events.begin(), t.events.end());
  if (decided && options_.orchestrator.probe == ProbeTiming::kAfterFinalMission) {
    probe_servants(s.state, s.agents, s.log);
  }
  for (Agent* a : s.agents) {
    if (!a) continue;
    for (auto& anomaly : a->take_anomalies()) s.log.emplace_back(std::move(anomaly));
  }
  s.waiting_since = options_.now();
  touch(s);
  s.cv.notify_all();
}

void SessionManager::advance(Session& s) {
  while (!s.state.terminal()) {
    std::optional<Seat> bot;
    for (Seat seat : awaiting_seats(s.state)) {
      if (s.agents[seat]) {
        bot = seat;
        break;
      }
    }
    if (!bot) break;
    std::vector<GameEvent> anomalies;
    const Action a = obtain_action(*s.agents[*bot], s.state, *bot,
                                   options_.orchestrator, anomalies);
    s.log.insert(s.log.end(), anomalies.begin(), anomalies.end());
    apply(s, *bot, a);
  }
  finish_if_over(s);
}

void SessionManager::finish_if_over(Session& s) {
  if (!s.state.terminal() || s.flushed) return;
  s.flushed = true;
  s.cv.notify_all();
  if (!options_.replay_dir) return;
  GameRecord r;
  r.config = s.state.config;
  r.base_seed = s.state.seed;
  r.seed = s.state.seed;
  r.roles = s.state.roles;
  r.agent_kinds = s.kinds;
  r.setting = "gateway";
  r.result = s.state.result;
  r.events = s.log;
  write_replay(r, *options_.replay_dir / (s.id + ".jsonl"));
}

json SessionManager::join(const std::string& game, Seat seat,
                          const std::string& token) {
  auto s = find(game);
  std::lock_guard lock(s->mu);
  check_seat_token(*s, seat, token);
  s->joined[seat] = true;
  touch(*s);
  if (!s->started &&
      std::all_of(s->joined.begin(), s->joined.end(), [](bool j) { return j; })) {
    start(*s);
  }
  return json{{"seat", seat}, {"joined", true}, {"started", s->started}};
}

json SessionManager::observation(const std::string& game, Seat seat,
                                 const std::string& token) {
  auto s = find(game);
  std::lock_guard lock(s->mu);
  check_seat_token(*s, seat, token);
  json j = make_observation(s->state, seat);
  j["started"] = s->started;
  j["schema_version"] = kWireSchemaVersion;
  j["cursor"] = static_cast<std::int64_t>(s->log.size()) - 1;
  return j;
}

json SessionManager::submit_action(const std::string& game, Seat seat,
                                   const std::string& token,
                                   const json& body) {
  Action action;
  try {
    action = body.get<Action>();
  } catch (const std::exception& e) {
    throw GatewayError(400, "malformed_action", e.what());
  }
  if (std::holds_alternative<Say>(action)) {
    throw GatewayError(400, "use_chat", "utterances go to the chat endpoint");
  }
  auto s = find(game);
  std::lock_guard lock(s->mu);
  check_seat_token(*s, seat, token);
  if (!s->started) throw GatewayError(409, "game_not_started", "waiting for seats to join");
  try {
    apply(*s, seat, action);
  } catch (const RuleViolation& e) {
    throw GatewayError(rule_status(e.code()), std::string(rule_code_key(e.code())),
                       e.what());
  }
  advance(*s);
  return json{{"ok", true},
              {"cursor", static_cast<std::int64_t>(s->log.size()) - 1}};
}

json SessionManager::submit_chat(const std::string& game, Seat seat,
                                 const std::string& token,
                                 const std::string& text) {
  auto s = find(game);
  std::lock_guard lock(s->mu);
  check_seat_token(*s, seat, token);
  if (!s->started) throw GatewayError(409, "game_not_started", "waiting for seats to join");
  if (!s->state.discussing()) {
    throw GatewayError(409, "no_discussion", "no discussion round is open");
  }
  const std::size_t before = s->log.size();
  try {
    apply(*s, seat, Say{text});
  } catch (const RuleViolation& e) {
    throw GatewayError(rule_status(e.code()), std::string(rule_code_key(e.code())),
                       e.what());
  }
  bool truncated = false;
  for (std::size_t i = before; i < s->log.size(); ++i) {
    if (const auto* sp = std::get_if<event::Spoke>(&s->log[i])) truncated = sp->truncated;
  }
  advance(*s);
  return json{{"ok", true},
              {"truncated", truncated},
              {"cursor", static_cast<std::int64_t>(s->log.size()) - 1}};
}

namespace {

json public_view(const GameState& st) {
  json j{{"phase", phase_key(st.phase)},
         {"num_players", st.config.num_players},
         {"current_mission", st.current_mission},
         {"leader", st.leader},
         {"consecutive_rejections", st.consecutive_rejections},
         {"mission_team_sizes", st.config.mission_team_sizes},
         {"fails_required", st.config.fails_required},
         {"mission_ledger", st.mission_ledger},
         {"minutes", st.minutes},
         {"discussing", st.discussing()}};
  j["current_team"] = st.current_team ? json(*st.current_team) : json(nullptr);
  j["speaker"] = st.current_speaker() ? json(*st.current_speaker()) : json(nullptr);
  j["result"] = st.result ? json(result_key(*st.result)) : json(nullptr);
  return j;
}

}  // namespace

json SessionManager::spectate(const std::string& game, const std::string& token) {
  const Viewer v = authorize(game, std::nullopt, token);
  auto s = find(game);
  std::lock_guard lock(s->mu);
  json j = public_view(s->state);
  j["started"] = s->started;
  j["schema_version"] = kWireSchemaVersion;
  j["cursor"] = static_cast<std::int64_t>(s->log.size()) - 1;
  if (v.kind == ViewerKind::kOmniscientSpectator) {
    json roles = json::array();
    for (Role r : s->state.roles) roles.push_back(role_key(r));
    j["roles"] = roles;
  }
  return j;
}

json SessionManager::status(const std::string& game) {
  auto s = find(game);
  std::lock_guard lock(s->mu);
  json seats = json::array();
  for (Seat seat = 0; seat < static_cast<Seat>(s->kinds.size()); ++seat) {
    seats.push_back(json{{"seat", seat},
                         {"kind", s->kinds[seat]},
                         {"joined", static_cast<bool>(s->joined[seat])}});
  }
  return json{{"game_id", s->id},
              {"started", s->started},
              {"phase", phase_key(s->state.phase)},
              {"seats", seats},
              {"result", s->state.result ? json(result_key(*s->state.result))
                                         : json(nullptr)}};
}

EventSlice SessionManager::events(const std::string& game, const Viewer& viewer,
                                  std::optional<std::int64_t> since) {
  auto s = find(game);
  std::lock_guard lock(s->mu);
  EventSlice out;
  const auto size = static_cast<std::int64_t>(s->log.size());
  out.cursor = size - 1;
  out.finished = s->state.terminal();
  std::int64_t from = since.value_or(-1);
  if (from >= size) {
    json snap;
    if (viewer.kind == ViewerKind::kSeat) {
      snap["observation"] = make_observation(s->state, viewer.seat);
    } else {
      snap["state"] = public_view(s->state);
    }
    json events = json::array();
    for (std::int64_t i = 0; i < size; ++i) {
      const auto& e = s->log[static_cast<std::size_t>(i)];
      if (visible(e, viewer)) events.push_back(wire_event(e, static_cast<std::uint64_t>(i)));
    }
    snap["events"] = std::move(events);
    snap["cursor"] = out.cursor;
    out.snapshot = std::move(snap);
    return out;
  }
  for (std::int64_t i = std::max<std::int64_t>(from + 1, 0); i < size; ++i) {
    const auto& e = s->log[static_cast<std::size_t>(i)];
    if (!visible(e, viewer)) continue;
    out.items.push_back(
        StreamItem{static_cast<std::uint64_t>(i), wire_event(e, static_cast<std::uint64_t>(i))});
  }
  return out;
}

bool SessionManager::wait(const std::string& game, std::int64_t cursor,
                          std::chrono::milliseconds timeout) {
  auto s = find(game);
  std::unique_lock lock(s->mu);
  return s->cv.wait_for(lock, timeout, [&] {
    return static_cast<std::int64_t>(s->log.size()) - 1 > cursor ||
           s->state.terminal();
  });
}

void SessionManager::tick() {
  std::vector<std::pair<std::string, std::shared_ptr<Session>>> all;
  {
    std::lock_guard lock(mu_);
    all.assign(sessions_.begin(), sessions_.end());
  }
  const auto now = options_.now();
  std::vector<std::string> expired;
  for (auto& [id, s] : all) {
    std::lock_guard lock(s->mu);
    if (options_.action_timeout && s->started && !s->state.terminal() &&
        now - s->waiting_since >= *options_.action_timeout) {
      for (Seat seat : awaiting_seats(s->state)) {
        const auto still = awaiting_seats(s->state);
        if (s->agents[seat] ||
            std::find(still.begin(), still.end(), seat) == still.end()) {
          continue;
        }
        s->log.emplace_back(event::AgentAnomaly{seat, "timeout_default",
                                                "no action before the deadline"});
        apply(*s, seat, default_action(s->state, seat));
        if (s->state.terminal()) break;
      }
      advance(*s);
    }
    if (now - s->updated >= options_.session_ttl) expired.push_back(id);
  }
  std::lock_guard lock(mu_);
  for (const auto& id : expired) sessions_.erase(id);
}

std::vector<GameEvent> SessionManager::log(const std::string& game) const {
  auto s = find(game);
  std::lock_guard lock(s->mu);
  return s->log;
}

GameState SessionManager::state(const std::string& game) const {
  auto s = find(game);
  std::lock_guard lock(s->mu);
  return s->state;
}

}  // namespace avalon::gateway
