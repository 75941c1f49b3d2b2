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
#include <atomic>
#include <filesystem>
#include <thread>

#include <gtest/gtest.h>

#include "avalon/wire.hpp"

namespace avalon::gateway {
namespace {

using nlohmann::json;

json plan(std::vector<std::string> seats, std::uint64_t seed = 5) {
  return json{{"num_players", seats.size()}, {"seats", seats}, {"seed", seed}};
}

std::vector<std::string> external(int n) {
  return std::vector<std::string>(n, kExternalSeat);
}

template <typename F>
GatewayError error_of(F&& f) {
  try {
    f();
  } catch (const GatewayError& e) {
    return e;
  }
  ADD_FAILURE() << "expected a GatewayError";
  return GatewayError(0, "", "");
}

// A five-seat game where every seat is held by a token and has joined.
struct Table {
  SessionManager& mgr;
  Created created;
  GameState state() const { return mgr.state(created.game_id); }
  const std::string& id() const { return created.game_id; }
  const std::string& token(Seat s) const { return created.seat_tokens.at(s); }

  Table(SessionManager& m, const json& body) : mgr(m) {
    created = mgr.create_game(parse_create_request(body));
    for (const auto& [seat, tok] : created.seat_tokens) mgr.join(id(), seat, tok);
  }

  Seat seat_with(Role role) const {
    const auto roles = state().roles;
    return static_cast<Seat>(std::find(roles.begin(), roles.end(), role) -
                             roles.begin());
  }

  json act(Seat s, const json& action) {
    return mgr.submit_action(id(), s, token(s), action);
  }

  // Plays every awaiting external seat with its first legal action.
  void play_out() {
    for (int guard = 0; guard < 10000 && !state().terminal(); ++guard) {
      const GameState st = state();
      const Seat s = awaiting_seats(st).front();
      if (st.discussing()) {
        mgr.submit_chat(id(), s, token(s), "Hello there.");
        continue;
      }
      const json obs = mgr.observation(id(), s, token(s));
      act(s, obs.at("legal_actions").at(0));
    }
  }
};

json propose(std::vector<int> team) {
  return json{{"type", "propose_team"}, {"team", team}};
}
const json kApprove{{"type", "vote_team"}, {"vote", "approve"}};
const json kPass{{"type", "vote_quest"}, {"vote", "pass"}};

TEST(CreateRequest, SeatPlanMustMatchPlayerCount) {
  EXPECT_EQ(parse_create_request(plan(external(5))).config, preset(5));
  EXPECT_EQ(error_of([] {
              parse_create_request(json{{"num_players", 5}, {"seats", external(4)}});
            }).status(),
            400);
  const auto bad = error_of([] {
    parse_create_request(plan({"naive", "naive", "naive", "naive", "robot"}));
  });
  EXPECT_EQ(bad.status(), 400);
  EXPECT_EQ(bad.code(), "invalid_config");
  EXPECT_EQ(error_of([] { parse_create_request(json{{"num_players", 0}, {"seats", json::array()}}); })
                .status(),
            400);
  EXPECT_EQ(error_of([] { parse_create_request(json::array()); }).status(), 400);
  EXPECT_EQ(error_of([] { parse_create_request(json{{"num_players", 5}}); }).status(), 400);
}

TEST(SessionManager, AllBotGamesStartAndFinishImmediately) {
  SessionManager mgr;
  const auto c = mgr.create_game(
      parse_create_request(plan(std::vector<std::string>(5, "naive"))));
  EXPECT_TRUE(c.started);
  EXPECT_TRUE(c.seat_tokens.empty());
  EXPECT_TRUE(mgr.state(c.game_id).terminal());
  const json st = mgr.status(c.game_id);
  EXPECT_TRUE(st.at("started").get<bool>());
  EXPECT_FALSE(st.at("result").is_null());
  EXPECT_EQ(st.at("phase"), "terminal");
}

TEST(SessionManager, GameWaitsForEveryExternalSeatToJoin) {
  SessionManager mgr;
  const auto c = mgr.create_game(parse_create_request(
      plan({"naive", kExternalSeat, "random", kExternalSeat, "naive"})));
  EXPECT_FALSE(c.started);
  ASSERT_EQ(c.seat_tokens.size(), 2u);
  EXPECT_TRUE(c.seat_tokens.count(1) && c.seat_tokens.count(3));
  EXPECT_EQ(c.seat_tokens.at(1).size(), 32u);
  EXPECT_NE(c.seat_tokens.at(1), c.seat_tokens.at(3));

  EXPECT_EQ(error_of([&] {
              mgr.submit_action(c.game_id, 1, c.seat_tokens.at(1), kApprove);
            }).code(),
            "game_not_started");
  EXPECT_FALSE(mgr.join(c.game_id, 1, c.seat_tokens.at(1)).at("started").get<bool>());
  EXPECT_TRUE(mgr.join(c.game_id, 3, c.seat_tokens.at(3)).at("started").get<bool>());
  EXPECT_TRUE(mgr.status(c.game_id).at("started").get<bool>());
}

TEST(SessionManager, ObservationsHideSidesFromServants) {
  SessionManager mgr;
  Table t(mgr, plan(external(5)));
  const Seat servant = t.seat_with(Role::kServant);
  const Seat assassin = t.seat_with(Role::kAssassin);
  const json so = mgr.observation(t.id(), servant, t.token(servant));
  EXPECT_EQ(so.at("role"), "servant");
  EXPECT_FALSE(so.contains("side_knowledge"));
  const json ao = mgr.observation(t.id(), assassin, t.token(assassin));
  ASSERT_TRUE(ao.contains("side_knowledge"));
  EXPECT_EQ(ao.at("side_knowledge").size(), 5u);
  EXPECT_EQ(ao.at("schema_version"), kWireSchemaVersion);
}

TEST(SessionManager, TokensAreBoundToGameAndSeat) {
  SessionManager mgr;
  Table a(mgr, plan(external(5), 1));
  Table b(mgr, plan(external(5), 2));
  EXPECT_EQ(error_of([&] { mgr.observation(a.id(), 0, b.token(0)); }).status(), 401);
  EXPECT_EQ(error_of([&] { mgr.observation(a.id(), 1, a.token(0)); }).status(), 401);
  EXPECT_EQ(error_of([&] { mgr.observation(a.id(), 0, ""); }).status(), 401);
  EXPECT_EQ(error_of([&] { mgr.observation(a.id(), 9, a.token(0)); }).status(), 404);
  EXPECT_EQ(error_of([&] { mgr.observation("nope", 0, a.token(0)); }).status(), 404);
  EXPECT_EQ(error_of([&] { mgr.spectate(a.id(), b.created.spectator_token); }).status(),
            401);
  EXPECT_EQ(error_of([&] { mgr.spectate(a.id(), a.token(0)); }).status(), 401);
}

TEST(SessionManager, RuleViolationsMapToCodes) {
  SessionManager mgr;
  Table t(mgr, plan(external(5)));
  const Seat leader = t.state().leader;
  const Seat other = (leader + 1) % 5;

  const auto size = error_of([&] { t.act(leader, propose({0, 1, 2})); });
  EXPECT_EQ(size.status(), 400);
  EXPECT_EQ(size.code(), "illegal_team_size");

  const auto phase = error_of([&] { t.act(leader, kApprove); });
  EXPECT_EQ(phase.status(), 409);
  EXPECT_EQ(phase.code(), "wrong_phase");

  EXPECT_EQ(error_of([&] { t.act(other, propose({0, 1})); }).code(), "not_your_turn");
  EXPECT_EQ(error_of([&] { t.act(leader, json{{"type", "fly"}}); }).code(),
            "malformed_action");
  EXPECT_EQ(error_of([&] {
              t.act(leader, json{{"type", "say"}, {"text", "hi"}});
            }).code(),
            "use_chat");
  EXPECT_EQ(error_of([&] {
              mgr.submit_chat(t.id(), leader, t.token(leader), "hi");
            }).code(),
            "no_discussion");
}

TEST(SessionManager, DiscussionSlotsAreEnforced) {
  SessionManager mgr;
  json body = plan(external(5));
  body["config"] = preset(5);
  body["config"]["discussion_enabled"] = true;
  Table t(mgr, body);
  ASSERT_TRUE(t.state().discussing());
  const Seat speaker = *t.state().current_speaker();
  const Seat other = (speaker + 1) % 5;
  const auto e = error_of([&] { mgr.submit_chat(t.id(), other, t.token(other), "x"); });
  EXPECT_EQ(e.status(), 409);
  EXPECT_EQ(e.code(), "not_your_slot");
  const json ok = mgr.submit_chat(t.id(), speaker, t.token(speaker),
                                  "One. Two. Three.");
  EXPECT_TRUE(ok.at("truncated").get<bool>());
  t.play_out();
  EXPECT_TRUE(t.state().result.has_value());
}

TEST(SessionManager, BallotsStaySealedUntilTheLastOne) {
  SessionManager mgr;
  Table t(mgr, plan(external(5)));
  const Seat leader = t.state().leader;
  t.act(leader, propose({0, 1}));
  auto revealed = [&] {
    const auto log = mgr.log(t.id());
    return std::count_if(log.begin(), log.end(), [](const GameEvent& e) {
      return std::holds_alternative<event::TeamVoteRevealed>(e);
    });
  };
  for (Seat s = 0; s < 4; ++s) {
    const json ack = t.act(s, kApprove);
    EXPECT_TRUE(ack.at("ok").get<bool>());
    EXPECT_EQ(revealed(), 0);
  }
  t.act(4, kApprove);
  EXPECT_EQ(revealed(), 1);
  EXPECT_EQ(phase_key(t.state().phase), "quest");

  // Quest acks say nothing about the outcome until the team is done.
  const json ack = t.act(0, kPass);
  EXPECT_EQ(ack.size(), 2u);
  EXPECT_FALSE(mgr.state(t.id()).mission_ledger.size());
  t.act(1, kPass);
  EXPECT_EQ(mgr.state(t.id()).mission_ledger.size(), 1u);
}

TEST(SessionManager, ConcurrentDuplicateBallotsCountOnce) {
  SessionManager mgr;
  Table t(mgr, plan(external(5)));
  t.act(t.state().leader, propose({0, 1}));
  std::atomic<int> ok{0};
  std::atomic<int> dup{0};
  std::vector<std::thread> threads;
  for (int i = 0; i < 16; ++i) {
    threads.emplace_back([&] {
      try {
        t.act(2, kApprove);
        ++ok;
      } catch (const GatewayError& e) {
        if (e.code() == "duplicate_ballot") ++dup;
      }
    });
  }
  for (auto& th : threads) th.join();
  EXPECT_EQ(ok.load(), 1);
  EXPECT_EQ(dup.load(), 15);
}

TEST(SessionManager, EventCursorsResumeAndResync) {
  SessionManager mgr;
  Table t(mgr, plan(external(5)));
  const Viewer seat0 = mgr.authorize(t.id(), 0, t.token(0));
  const EventSlice all = mgr.events(t.id(), seat0, std::nullopt);
  ASSERT_FALSE(all.items.empty());
  EXPECT_EQ(all.items.front().event.at("type"), "game_started");
  EXPECT_FALSE(all.snapshot.has_value());

  EXPECT_TRUE(mgr.events(t.id(), seat0, all.cursor).items.empty());
  EXPECT_FALSE(mgr.wait(t.id(), all.cursor, std::chrono::milliseconds(10)));

  t.act(t.state().leader, propose({0, 1}));
  const EventSlice next = mgr.events(t.id(), seat0, all.cursor);
  ASSERT_FALSE(next.items.empty());
  EXPECT_EQ(next.items.front().id, static_cast<std::uint64_t>(all.cursor + 1));
  EXPECT_EQ(next.items.front().event.at("seq"), all.cursor + 1);
  EXPECT_TRUE(mgr.wait(t.id(), all.cursor, std::chrono::milliseconds(10)));

  const EventSlice stale = mgr.events(t.id(), seat0, next.cursor + 100);
  ASSERT_TRUE(stale.snapshot.has_value());
  EXPECT_TRUE(stale.items.empty());
  EXPECT_TRUE(stale.snapshot->contains("observation"));
  EXPECT_EQ(stale.snapshot->at("cursor"), next.cursor);
}

TEST(SessionManager, ViewersNeverSeeHiddenInformation) {
  SessionManager mgr;
  json body = plan(external(5), 8);
  body["omniscient_spectator"] = true;
  Table t(mgr, body);
  t.play_out();
  const Seat servant = t.seat_with(Role::kServant);
  const std::string spectator = t.created.spectator_token;
  ASSERT_TRUE(t.created.omniscient_token.has_value());

  const json blind = mgr.spectate(t.id(), spectator);
  EXPECT_FALSE(blind.contains("roles"));
  const json all_seeing = mgr.spectate(t.id(), *t.created.omniscient_token);
  EXPECT_EQ(all_seeing.at("roles").size(), 5u);

  for (const Viewer& v :
       {mgr.authorize(t.id(), servant, t.token(servant)),
        mgr.authorize(t.id(), std::nullopt, spectator)}) {
    for (const auto& item : mgr.events(t.id(), v, std::nullopt).items) {
      const std::string type = item.event.at("type");
      EXPECT_NE(type, "sides_probed");
      if (type == "agent_anomaly") EXPECT_EQ(item.event.at("seat"), servant);
      const std::string text = item.event.dump();
      for (const char* role : {"\"merlin\"", "\"assassin\"", "\"minion\"", "\"servant\""}) {
        EXPECT_EQ(text.find(role), std::string::npos) << text;
      }
    }
  }
  const Viewer god = mgr.authorize(t.id(), std::nullopt, *t.created.omniscient_token);
  EXPECT_EQ(mgr.events(t.id(), god, std::nullopt).items.size(), mgr.log(t.id()).size());
}

TEST(Visibility, AnomaliesBelongToTheirSeat) {
  const GameEvent anomaly = event::AgentAnomaly{2, "timeout_default", ""};
  const GameEvent probe = event::SidesProbed{1, {0.5}};
  const GameEvent started = event::GameStarted{5, 0};
  EXPECT_TRUE(visible(anomaly, Viewer{ViewerKind::kSeat, 2}));
  EXPECT_FALSE(visible(anomaly, Viewer{ViewerKind::kSeat, 1}));
  EXPECT_FALSE(visible(anomaly, Viewer{}));
  EXPECT_FALSE(visible(probe, Viewer{ViewerKind::kSeat, 1}));
  EXPECT_TRUE(visible(probe, Viewer{ViewerKind::kOmniscientSpectator, 0}));
  EXPECT_TRUE(visible(started, Viewer{}));
}

struct FakeClock {
  Clock::time_point now = Clock::time_point{} + std::chrono::hours(1);
  GatewayOptions options() {
    GatewayOptions o;
    o.now = [this] { return now; };
    return o;
  }
};

TEST(SessionManager, SilentSeatsGetDefaultActionsAfterTheDeadline) {
  FakeClock clock;
  GatewayOptions o = clock.options();
  o.action_timeout = std::chrono::milliseconds(1000);
  SessionManager mgr(o);
  Table t(mgr, plan(external(5)));
  const Seat leader = t.state().leader;
  mgr.tick();
  EXPECT_EQ(phase_key(t.state().phase), "team_selection");
  clock.now += std::chrono::milliseconds(1000);
  mgr.tick();
  EXPECT_EQ(phase_key(t.state().phase), "team_voting");
  const auto log = mgr.log(t.id());
  const auto it = std::find_if(log.begin(), log.end(), [](const GameEvent& e) {
    return std::holds_alternative<event::AgentAnomaly>(e);
  });
  ASSERT_NE(it, log.end());
  EXPECT_EQ(std::get<event::AgentAnomaly>(*it).seat, leader);
  EXPECT_EQ(std::get<event::AgentAnomaly>(*it).kind, "timeout_default");

  // Every remaining ballot times out together and the game keeps going.
  clock.now += std::chrono::milliseconds(1000);
  mgr.tick();
  EXPECT_NE(phase_key(t.state().phase), "team_voting");
  for (int i = 0; i < 200 && !t.state().terminal(); ++i) {
    clock.now += std::chrono::milliseconds(1000);
    mgr.tick();
  }
  EXPECT_TRUE(t.state().terminal());
}

TEST(SessionManager, IdleSessionsExpire) {
  FakeClock clock;
  GatewayOptions o = clock.options();
  o.session_ttl = std::chrono::seconds(60);
  SessionManager mgr(o);
  Table t(mgr, plan(external(5)));
  EXPECT_EQ(mgr.session_count(), 1u);
  clock.now += std::chrono::seconds(59);
  mgr.tick();
  EXPECT_EQ(mgr.session_count(), 1u);
  mgr.observation(t.id(), 0, t.token(0));
  clock.now += std::chrono::seconds(1);
  mgr.tick();
  EXPECT_EQ(mgr.session_count(), 0u);
  EXPECT_EQ(error_of([&] { mgr.status(t.id()); }).status(), 404);
}

TEST(SessionManager, SessionLimitIsEnforced) {
  GatewayOptions o;
  o.max_sessions = 2;
  SessionManager mgr(o);
  mgr.create_game(parse_create_request(plan(external(5))));
  mgr.create_game(parse_create_request(plan(external(5))));
  EXPECT_EQ(error_of([&] {
              mgr.create_game(parse_create_request(plan(external(5))));
            }).status(),
            503);
}

TEST(SessionManager, FinishedGamesAreWrittenAsReplays) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("avalon_gateway_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  GatewayOptions o;
  o.replay_dir = dir;
  SessionManager mgr(o);
  const auto c = mgr.create_game(
      parse_create_request(plan(std::vector<std::string>(5, "random"))));
  EXPECT_TRUE(std::filesystem::exists(dir / (c.game_id + ".jsonl")));
  std::filesystem::remove_all(dir);
}

TEST(Tokens, AreRandomHex) {
  const std::string a = random_token();
  EXPECT_EQ(a.size(), 32u);
  EXPECT_TRUE(std::all_of(a.begin(), a.end(), [](char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
  }));
  EXPECT_NE(a, random_token());
}

}  // namespace
}  // namespace avalon::gateway
