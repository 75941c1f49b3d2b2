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

#include "avalon/wire.hpp"

#include <fmt/format.h>

namespace avalon {

using nlohmann::json;

namespace {

template <typename Enum, std::size_t N>
Enum lookup(const std::array<std::pair<std::string_view, Enum>, N>& table,
            const json& j, std::string_view what) {
  if (!j.is_string()) throw WireError(fmt::format("{} must be a string", what));
  const auto key = j.get<std::string>();
  for (const auto& [name, value] : table) {
    if (name == key) return value;
  }
  throw WireError(fmt::format("unknown {} '{}'", what, key));
}

constexpr std::array<std::pair<std::string_view, TeamVote>, 2> kTeamVotes{
    {{"approve", TeamVote::kApprove}, {"reject", TeamVote::kReject}}};
constexpr std::array<std::pair<std::string_view, QuestVote>, 2> kQuestVotes{
    {{"pass", QuestVote::kPass}, {"fail", QuestVote::kFail}}};
constexpr std::array<std::pair<std::string_view, MissionOutcome>, 2>
    kOutcomes{{{"success", MissionOutcome::kSuccess},
               {"failure", MissionOutcome::kFailure}}};

const json& field(const json& j, const char* key) {
  if (!j.is_object()) throw WireError("expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw WireError(fmt::format("missing field '{}'", key));
  return *it;
}

int int_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_integer()) {
    throw WireError(fmt::format("field '{}' must be an integer", key));
  }
  return v.get<int>();
}

std::string string_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_string()) {
    throw WireError(fmt::format("field '{}' must be a string", key));
  }
  return v.get<std::string>();
}

bool bool_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_boolean()) {
    throw WireError(fmt::format("field '{}' must be a boolean", key));
  }
  return v.get<bool>();
}

Phase phase_field(const json& j, const char* key) {
  auto p = parse_phase_key(string_field(j, key));
  if (!p) throw WireError(fmt::format("unknown phase in '{}'", key));
  return *p;
}

json team_votes(const std::vector<TeamVote>& votes) {
  json arr = json::array();
  for (TeamVote v : votes) arr.push_back(team_vote_key(v));
  return arr;
}

std::vector<TeamVote> parse_team_votes(const json& j) {
  if (!j.is_array()) throw WireError("votes must be an array");
  std::vector<TeamVote> out;
  for (const json& v : j) out.push_back(lookup(kTeamVotes, v, "team vote"));
  return out;
}

template <std::size_t N>
std::array<int, N> int_array(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_array() || v.size() != N) {
    throw WireError(fmt::format("field '{}' must hold {} integers", key, N));
  }
  std::array<int, N> out{};
  for (std::size_t i = 0; i < N; ++i) {
    if (!v[i].is_number_integer()) {
      throw WireError(fmt::format("field '{}' must hold integers", key));
    }
    out[i] = v[i].get<int>();
  }
  return out;
}

}  // namespace

std::string_view team_vote_key(TeamVote v) {
  return v == TeamVote::kApprove ? "approve" : "reject";
}
std::string_view quest_vote_key(QuestVote v) {
  return v == QuestVote::kPass ? "pass" : "fail";
}
std::string_view side_key(Side s) {
  return s == Side::kGood ? "good" : "evil";
}
std::string_view outcome_key(MissionOutcome o) {
  return o == MissionOutcome::kSuccess ? "success" : "failure";
}

void to_json(json& j, const Team& team) { j = team.seats(); }

void from_json(const json& j, Team& team) {
  if (!j.is_array()) throw WireError("a team must be an array of seats");
  Team t;
  for (const json& s : j) {
    if (!s.is_number_integer()) throw WireError("seats must be integers");
    const int seat = s.get<int>();
    if (seat < 0 || seat >= kMaxPlayers) {
      throw WireError(fmt::format("seat {} out of range", seat));
    }
    if (t.contains(seat)) {
      throw WireError(fmt::format("seat {} listed twice", seat));
    }
    t = t.with(seat);
  }
  team = t;
}

void to_json(json& j, const GameConfig& c) {
  json roles = json::array();
  for (Role r : c.roles) roles.push_back(role_key(r));
  j = json{{"num_players", c.num_players},
           {"roles", roles},
           {"mission_team_sizes", c.mission_team_sizes},
           {"fails_required", c.fails_required},
           {"max_consecutive_rejections", c.max_consecutive_rejections},
           {"discussion_enabled", c.discussion_enabled},
           {"discussion_sentence_limit", c.discussion_sentence_limit},
           {"reveal_vote_history_to_agents", c.reveal_vote_history_to_agents}};
}

void from_json(const json& j, GameConfig& c) {
  GameConfig out;
  try {
    out = preset(int_field(j, "num_players"));
  } catch (const ConfigError& e) {
    if (!j.contains("roles")) throw WireError(e.what());
    out.num_players = int_field(j, "num_players");
  }
  if (j.contains("roles")) {
    const json& roles = j.at("roles");
    if (!roles.is_array()) throw WireError("roles must be an array");
    out.roles.clear();
    for (const json& r : roles) {
      if (!r.is_string()) throw WireError("roles must be strings");
      auto role = parse_role_key(r.get<std::string>());
      if (!role) throw WireError("unknown role " + r.dump());
      out.roles.push_back(*role);
    }
  }
  if (j.contains("mission_team_sizes")) {
    out.mission_team_sizes = int_array<kNumMissions>(j, "mission_team_sizes");
  }
  if (j.contains("fails_required")) {
    out.fails_required = int_array<kNumMissions>(j, "fails_required");
  }
  if (j.contains("max_consecutive_rejections")) {
    out.max_consecutive_rejections = int_field(j, "max_consecutive_rejections");
  }
  if (j.contains("discussion_enabled")) {
    out.discussion_enabled = bool_field(j, "discussion_enabled");
  }
  if (j.contains("discussion_sentence_limit")) {
    out.discussion_sentence_limit = int_field(j, "discussion_sentence_limit");
  }
  if (j.contains("reveal_vote_history_to_agents")) {
    out.reveal_vote_history_to_agents =
        bool_field(j, "reveal_vote_history_to_agents");
  }
  c = std::move(out);
}

void to_json(json& j, const Action& action) {
  std::visit(
      [&j](const auto& a) {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, ProposeTeam>) {
          j = json{{"type", "propose_team"}, {"team", a.team}};
        } else if constexpr (std::is_same_v<T, VoteTeam>) {
          j = json{{"type", "vote_team"}, {"vote", team_vote_key(a.vote)}};
        } else if constexpr (std::is_same_v<T, VoteQuest>) {
          j = json{{"type", "vote_quest"}, {"vote", quest_vote_key(a.vote)}};
        } else if constexpr (std::is_same_v<T, Assassinate>) {
          j = json{{"type", "assassinate"}, {"target", a.target}};
        } else {
          j = json{{"type", "say"}, {"text", a.text}};
        }
      },
      action);
}

void from_json(const json& j, Action& action) {
  const std::string type = string_field(j, "type");
  if (type == "propose_team") {
    action = ProposeTeam{field(j, "team").get<Team>()};
  } else if (type == "vote_team") {
    action = VoteTeam{lookup(kTeamVotes, field(j, "vote"), "team vote")};
  } else if (type == "vote_quest") {
    action = VoteQuest{lookup(kQuestVotes, field(j, "vote"), "quest vote")};
  } else if (type == "assassinate") {
    action = Assassinate{int_field(j, "target")};
  } else if (type == "say") {
    action = Say{string_field(j, "text")};
  } else {
    throw WireError(fmt::format("unknown action type '{}'", type));
  }
}

void to_json(json& j, const Utterance& u) {
  j = json{{"seat", u.seat}, {"text", u.text}};
}
void from_json(const json& j, Utterance& u) {
  u.seat = int_field(j, "seat");
  u.text = string_field(j, "text");
}

void to_json(json& j, const ProposalRecord& p) {
  j = json{{"mission", p.mission},   {"leader", p.leader},
           {"team", p.team},         {"votes", team_votes(p.votes)},
           {"approved", p.approved}, {"forced", p.forced}};
}
void from_json(const json& j, ProposalRecord& p) {
  p.mission = int_field(j, "mission");
  p.leader = int_field(j, "leader");
  p.team = field(j, "team").get<Team>();
  p.votes = parse_team_votes(field(j, "votes"));
  p.approved = bool_field(j, "approved");
  p.forced = bool_field(j, "forced");
}

void to_json(json& j, const MissionRecord& m) {
  j = json{{"mission_index", m.mission_index},
           {"team", m.team},
           {"fail_votes", m.fail_votes},
           {"pass_votes", m.pass_votes},
           {"outcome", outcome_key(m.outcome)}};
}
void from_json(const json& j, MissionRecord& m) {
  m.mission_index = int_field(j, "mission_index");
  m.team = field(j, "team").get<Team>();
  m.fail_votes = int_field(j, "fail_votes");
  m.pass_votes = int_field(j, "pass_votes");
  m.outcome = lookup(kOutcomes, field(j, "outcome"), "outcome");
}

std::string_view event_type(const GameEvent& e) {
  static constexpr std::array<std::string_view, std::variant_size_v<GameEvent>>
      kNames{"game_started",       "phase_entered",  "discussion_opened",
             "spoke",              "discussion_closed", "team_proposed",
             "team_vote_revealed", "quest_resolved", "assassination_resolved",
             "game_ended",         "agent_anomaly",  "sides_probed"};
  return kNames[e.index()];
}

void to_json(json& j, const GameEvent& e) {
  j = std::visit(
      [](const auto& ev) -> json {
        using T = std::decay_t<decltype(ev)>;
        using namespace event;
        if constexpr (std::is_same_v<T, GameStarted>) {
          return {{"num_players", ev.num_players}, {"leader", ev.leader}};
        } else if constexpr (std::is_same_v<T, PhaseEntered>) {
          return {{"phase", phase_key(ev.phase)},
                  {"mission", ev.mission},
                  {"leader", ev.leader}};
        } else if constexpr (std::is_same_v<T, DiscussionOpened>) {
          return {{"order", ev.order}};
        } else if constexpr (std::is_same_v<T, Spoke>) {
          return {{"seat", ev.seat},
                  {"text", ev.text},
                  {"truncated", ev.truncated}};
        } else if constexpr (std::is_same_v<T, DiscussionClosed>) {
          return json::object();
        } else if constexpr (std::is_same_v<T, TeamProposed>) {
          return {{"mission", ev.mission}, {"leader", ev.leader},
                  {"team", ev.team},       {"attempt", ev.attempt},
                  {"forced", ev.forced}};
        } else if constexpr (std::is_same_v<T, TeamVoteRevealed>) {
          return {{"mission", ev.mission},
                  {"team", ev.team},
                  {"votes", team_votes(ev.votes)},
                  {"approved", ev.approved},
                  {"consecutive_rejections", ev.consecutive_rejections}};
        } else if constexpr (std::is_same_v<T, QuestResolved>) {
          return {{"record", ev.record}};
        } else if constexpr (std::is_same_v<T, AssassinationResolved>) {
          return {{"target", ev.target}};
        } else if constexpr (std::is_same_v<T, GameEnded>) {
          return {{"result", result_key(ev.result)}};
        } else if constexpr (std::is_same_v<T, AgentAnomaly>) {
          return {{"seat", ev.seat}, {"kind", ev.kind}, {"detail", ev.detail}};
        } else {
          return {{"seat", ev.seat}, {"good_probability", ev.good_probability}};
        }
      },
      e);
  j["type"] = event_type(e);
}

void from_json(const json& j, GameEvent& e) {
  const std::string type = string_field(j, "type");
  using namespace event;
  if (type == "game_started") {
    e = GameStarted{int_field(j, "num_players"), int_field(j, "leader")};
  } else if (type == "phase_entered") {
    e = PhaseEntered{phase_field(j, "phase"), int_field(j, "mission"),
                     int_field(j, "leader")};
  } else if (type == "discussion_opened") {
    e = DiscussionOpened{field(j, "order").get<std::vector<Seat>>()};
  } else if (type == "spoke") {
    e = Spoke{int_field(j, "seat"), string_field(j, "text"),
              bool_field(j, "truncated")};
  } else if (type == "discussion_closed") {
    e = DiscussionClosed{};
  } else if (type == "team_proposed") {
    e = TeamProposed{int_field(j, "mission"), int_field(j, "leader"),
                     field(j, "team").get<Team>(), int_field(j, "attempt"),
                     bool_field(j, "forced")};
  } else if (type == "team_vote_revealed") {
    e = TeamVoteRevealed{int_field(j, "mission"), field(j, "team").get<Team>(),
                         parse_team_votes(field(j, "votes")),
                         bool_field(j, "approved"),
                         int_field(j, "consecutive_rejections")};
  } else if (type == "quest_resolved") {
    e = QuestResolved{field(j, "record").get<MissionRecord>()};
  } else if (type == "assassination_resolved") {
    e = AssassinationResolved{int_field(j, "target")};
  } else if (type == "game_ended") {
    auto r = parse_result_key(string_field(j, "result"));
    if (!r) throw WireError("unknown game result");
    e = GameEnded{*r};
  } else if (type == "agent_anomaly") {
    e = AgentAnomaly{int_field(j, "seat"), string_field(j, "kind"),
                     string_field(j, "detail")};
  } else if (type == "sides_probed") {
    e = SidesProbed{int_field(j, "seat"),
                    field(j, "good_probability").get<std::vector<double>>()};
  } else {
    throw WireError(fmt::format("unknown event type '{}'", type));
  }
}

void to_json(json& j, const Observation& o) {
  j = json{{"seat", o.seat},
           {"role", role_key(o.role)},
           {"side", side_key(o.side())},
           {"num_players", o.num_players},
           {"num_evil", o.num_evil},
           {"phase", phase_key(o.phase)},
           {"discussing", o.discussing},
           {"discussion_order", o.discussion_order},
           {"current_mission", o.current_mission},
           {"leader", o.leader},
           {"consecutive_rejections", o.consecutive_rejections},
           {"mission_team_sizes", o.mission_team_sizes},
           {"fails_required", o.fails_required},
           {"discussion_sentence_limit", o.discussion_sentence_limit},
           {"mission_ledger", o.mission_ledger},
           {"minutes", o.minutes},
           {"legal_actions", o.legal_actions}};
  j["speaker"] = o.speaker ? json(*o.speaker) : json(nullptr);
  j["current_team"] = o.current_team ? json(*o.current_team) : json(nullptr);
  j["result"] = o.result ? json(result_key(*o.result)) : json(nullptr);
  if (o.side_knowledge) {
    json sides = json::array();
    for (Side s : *o.side_knowledge) sides.push_back(side_key(s));
    j["side_knowledge"] = sides;
  }
  if (o.proposal_history) j["proposal_history"] = *o.proposal_history;
}

}  // namespace avalon
