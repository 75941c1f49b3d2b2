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

#include "avalon/replay.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "avalon/wire.hpp"

namespace avalon {

using nlohmann::json;

ReplayError::ReplayError(std::size_t line, const std::string& message)
    : std::runtime_error(line == 0 ? message
                                   : fmt::format("line {}: {}", line, message)),
      line_(line) {}

std::vector<event::SidesProbed> GameRecord::probes() const {
  std::vector<event::SidesProbed> out;
  for (const auto& e : events) {
    if (const auto* p = std::get_if<event::SidesProbed>(&e)) out.push_back(*p);
  }
  return out;
}

namespace {

json header_json(const GameRecord& r, bool sealed) {
  json h{{"type", "header"},
         {"format_version", r.format_version},
         {"config", r.config},
         {"base_seed", r.base_seed},
         {"game_index", r.game_index},
         {"seed", r.seed},
         {"agent_kinds", r.agent_kinds},
         {"setting", r.setting},
         {"aborted", r.aborted}};
  if (r.roles && !sealed) {
    json roles = json::array();
    for (Role role : *r.roles) roles.push_back(role_key(role));
    h["roles"] = roles;
  }
  h["result"] = r.result ? json(result_key(*r.result)) : json(nullptr);
  if (r.aborted) h["abort_reason"] = r.abort_reason;
  if (r.prompt_sha256) h["prompt_sha256"] = *r.prompt_sha256;
  if (r.wall_ms) h["wall_ms"] = *r.wall_ms;
  return h;
}

GameRecord record_from_header(const json& h) {
  if (!h.is_object() || h.value("type", "") != "header") {
    throw WireError("first line must be the header");
  }
  GameRecord r;
  r.format_version = h.at("format_version").get<int>();
  if (r.format_version != kReplayFormatVersion) {
    throw WireError(fmt::format("unsupported format_version {}",
                                r.format_version));
  }
  r.config = h.at("config").get<GameConfig>();
  r.base_seed = h.at("base_seed").get<std::uint64_t>();
  r.game_index = h.at("game_index").get<std::uint64_t>();
  r.seed = h.at("seed").get<std::uint64_t>();
  r.agent_kinds = h.at("agent_kinds").get<std::vector<std::string>>();
  r.setting = h.at("setting").get<std::string>();
  r.aborted = h.at("aborted").get<bool>();
  if (h.contains("roles")) {
    std::vector<Role> roles;
    for (const auto& k : h.at("roles")) {
      auto role = parse_role_key(k.get<std::string>());
      if (!role) throw WireError("unknown role " + k.dump());
      roles.push_back(*role);
    }
    r.roles = std::move(roles);
  }
  if (const auto& res = h.at("result"); !res.is_null()) {
    auto parsed = parse_result_key(res.get<std::string>());
    if (!parsed) throw WireError("unknown result " + res.dump());
    r.result = *parsed;
  }
  if (h.contains("abort_reason")) {
    r.abort_reason = h.at("abort_reason").get<std::string>();
  }
  if (h.contains("prompt_sha256")) {
    r.prompt_sha256 = h.at("prompt_sha256").get<std::string>();
  }
  if (h.contains("wall_ms")) r.wall_ms = h.at("wall_ms").get<double>();
  return r;
}

}  // namespace

std::string to_jsonl(const GameRecord& record, bool sealed) {
  std::string out = header_json(record, sealed).dump();
  out += '\n';
  for (const auto& e : record.events) {
    out += json(e).dump();
    out += '\n';
  }
  return out;
}

GameRecord from_jsonl(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  std::optional<GameRecord> record;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) {
      throw ReplayError(number, "empty line");
    }
    try {
      const json j = json::parse(line);
      if (!record) {
        record = record_from_header(j);
      } else {
        record->events.push_back(j.get<GameEvent>());
      }
    } catch (const json::exception& e) {
      throw ReplayError(number, e.what());
    } catch (const WireError& e) {
      throw ReplayError(number, e.what());
    }
  }
  if (!record) throw ReplayError(0, "replay is empty");
  if (!text.empty() && text.back() != '\n') {
    throw ReplayError(number, "truncated final line");
  }
  return *record;
}

void write_replay(const GameRecord& record, const std::filesystem::path& path,
                  bool sealed) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ReplayError(0, "cannot write " + path.string());
  out << to_jsonl(record, sealed);
  if (!out) throw ReplayError(0, "write failed for " + path.string());
}

GameRecord read_replay(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ReplayError(0, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_jsonl(ss.str());
}

std::string pretty_print(const GameRecord& r) {
  std::string out = fmt::format("Game {} (seed {:#018x}, setting {})\n",
                                r.game_index, r.seed, r.setting);
  for (std::size_t s = 0; s < r.agent_kinds.size(); ++s) {
    out += fmt::format("  Player {}: {}{}\n", s,
                       r.roles ? std::string(role_name((*r.roles)[s])) + " / "
                               : std::string(),
                       r.agent_kinds[s]);
  }
  for (const auto& e : r.events) {
    using namespace event;
    std::visit(
        [&out](const auto& ev) {
          using T = std::decay_t<decltype(ev)>;
          if constexpr (std::is_same_v<T, PhaseEntered>) {
            out += fmt::format("-- {} (quest {}, leader {})\n",
                               phase_key(ev.phase), ev.mission + 1, ev.leader);
          } else if constexpr (std::is_same_v<T, Spoke>) {
            out += fmt::format("   Player {} says: {}{}\n", ev.seat, ev.text,
                               ev.truncated ? " [truncated]" : "");
          } else if constexpr (std::is_same_v<T, TeamProposed>) {
            out += fmt::format("   Player {} proposes {}{}\n", ev.leader,
                               ev.team.to_string(),
                               ev.forced ? " (forced)" : "");
          } else if constexpr (std::is_same_v<T, TeamVoteRevealed>) {
            std::string votes;
            for (TeamVote v : ev.votes) votes += v == TeamVote::kApprove ? 'Y' : 'N';
            out += fmt::format("   votes {} -> {}\n", votes,
                               ev.approved ? "approved" : "rejected");
          } else if constexpr (std::is_same_v<T, QuestResolved>) {
            out += fmt::format("   quest {} {} ({} fail, {} pass)\n",
                               ev.record.mission_index + 1,
                               outcome_key(ev.record.outcome),
                               ev.record.fail_votes, ev.record.pass_votes);
          } else if constexpr (std::is_same_v<T, AssassinationResolved>) {
            out += fmt::format("   Assassin strikes Player {}\n", ev.target);
          } else if constexpr (std::is_same_v<T, GameEnded>) {
            out += fmt::format("== {}\n", result_key(ev.result));
          } else if constexpr (std::is_same_v<T, AgentAnomaly>) {
            out += fmt::format("   ! Player {} {}: {}\n", ev.seat, ev.kind,
                               ev.detail);
          } else if constexpr (std::is_same_v<T, SidesProbed>) {
            out += fmt::format("   Player {} believes good: [{:.2f}]\n", ev.seat,
                               fmt::join(ev.good_probability, ", "));
          }
        },
        e);
  }
  if (r.aborted) out += "aborted: " + r.abort_reason + "\n";
  return out;
}

}  // namespace avalon
