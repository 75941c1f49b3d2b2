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

#include "avalon/prompts.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <openssl/evp.h>

namespace avalon {
namespace detail {
const std::map<std::string, std::string>& embedded_prompt_templates();
}  // namespace detail

namespace {

std::string seat_list(const std::vector<Seat>& seats) {
  return Team::from_seats(seats).to_string();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TemplateError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  if (!text.empty() && text.back() == '\n') text.pop_back();
  return text;
}

}  // namespace

const std::vector<std::string>& known_placeholders() {
  static const std::vector<std::string> kNames{
      "id",         "role",         "side",
      "team",       "team_size",    "max_id",
      "evil_players", "good_players", "player_id",
      "statements_from_leader", "discussions", "score_slots",
      "quest",      "result",       "fails"};
  return kNames;
}

PromptTemplate::PromptTemplate(std::string source) : source_(std::move(source)) {
  const auto& known = known_placeholders();
  std::string literal;
  for (std::size_t i = 0; i < source_.size(); ++i) {
    const char c = source_[i];
    if (c == '{' && i + 1 < source_.size() && source_[i + 1] == '{') {
      literal += '{';
      ++i;
    } else if (c == '}' && i + 1 < source_.size() && source_[i + 1] == '}') {
      literal += '}';
      ++i;
    } else if (c == '{') {
      const auto close = source_.find('}', i);
      if (close == std::string::npos) {
        throw TemplateError(fmt::format("unclosed brace at offset {}", i));
      }
      std::string name = source_.substr(i + 1, close - i - 1);
      if (std::find(known.begin(), known.end(), name) == known.end()) {
        throw TemplateError(fmt::format("unknown placeholder '{{{}}}'", name));
      }
      if (!literal.empty()) pieces_.push_back({false, std::move(literal)});
      literal.clear();
      if (std::find(names_.begin(), names_.end(), name) == names_.end()) {
        names_.push_back(name);
      }
      pieces_.push_back({true, std::move(name)});
      i = close;
    } else if (c == '}') {
      throw TemplateError(fmt::format("stray '}}' at offset {}", i));
    } else {
      literal += c;
    }
  }
  if (!literal.empty()) pieces_.push_back({false, std::move(literal)});
}

std::string PromptTemplate::render(
    const std::map<std::string, std::string>& values) const {
  std::string out;
  for (const Piece& p : pieces_) {
    if (!p.placeholder) {
      out += p.text;
      continue;
    }
    auto it = values.find(p.text);
    if (it == values.end()) {
      throw TemplateError(fmt::format("no value for '{{{}}}'", p.text));
    }
    out += it->second;
  }
  return out;
}

const std::vector<std::string>& PromptBundle::names() {
  static const std::vector<std::string> kNames{
      "rules",
      "role",
      "reveal",
      "request_team_selection",
      "request_team_vote",
      "request_quest",
      "request_assassination",
      "parse_team_selection",
      "parse_team_vote",
      "parse_quest",
      "parse_assassination",
      "recap",
      "outcome",
      "discuss_leader",
      "discuss_player",
      "probe",
      "probe_parse"};
  return kNames;
}

PromptBundle PromptBundle::from_sources(
    const std::map<std::string, std::string>& src) {
  auto get = [&src](const std::string& name) -> const std::string& {
    auto it = src.find(name);
    if (it == src.end()) throw TemplateError("missing template " + name);
    return it->second;
  };
  auto tpl = [&get](const std::string& name) {
    try {
      return PromptTemplate(get(name));
    } catch (const TemplateError& e) {
      throw TemplateError(name + ": " + e.what());
    }
  };
  PromptBundle b;
  b.rules = get("rules");
  b.role = tpl("role");
  b.reveal = tpl("reveal");
  b.request_team_selection = tpl("request_team_selection");
  b.request_team_vote = tpl("request_team_vote");
  b.request_quest = tpl("request_quest");
  b.request_assassination = tpl("request_assassination");
  b.parse_team_selection = tpl("parse_team_selection");
  b.parse_team_vote = tpl("parse_team_vote");
  b.parse_quest = tpl("parse_quest");
  b.parse_assassination = tpl("parse_assassination");
  b.recap = tpl("recap");
  b.outcome = tpl("outcome");
  b.discuss_leader = tpl("discuss_leader");
  b.discuss_player = tpl("discuss_player");
  b.probe = tpl("probe");
  b.probe_parse = tpl("probe_parse");
  return b;
}

const PromptBundle& PromptBundle::builtin() {
  static const PromptBundle kBundle =
      from_sources(detail::embedded_prompt_templates());
  return kBundle;
}

PromptBundle PromptBundle::load(const std::filesystem::path& dir) {
  std::map<std::string, std::string> src;
  for (const auto& name : names()) src[name] = read_file(dir / (name + ".txt"));
  return from_sources(src);
}

std::map<std::string, std::string> PromptBundle::sources() const {
  return {{"rules", rules},
          {"role", role.source()},
          {"reveal", reveal.source()},
          {"request_team_selection", request_team_selection.source()},
          {"request_team_vote", request_team_vote.source()},
          {"request_quest", request_quest.source()},
          {"request_assassination", request_assassination.source()},
          {"parse_team_selection", parse_team_selection.source()},
          {"parse_team_vote", parse_team_vote.source()},
          {"parse_quest", parse_quest.source()},
          {"parse_assassination", parse_assassination.source()},
          {"recap", recap.source()},
          {"outcome", outcome.source()},
          {"discuss_leader", discuss_leader.source()},
          {"discuss_player", discuss_player.source()},
          {"probe", probe.source()},
          {"probe_parse", probe_parse.source()}};
}

std::string PromptBundle::checksum() const {
  const auto src = sources();
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  for (const auto& name : names()) {
    const std::string& text = src.at(name);
    EVP_DigestUpdate(ctx, name.data(), name.size());
    EVP_DigestUpdate(ctx, "\0", 1);
    EVP_DigestUpdate(ctx, text.data(), text.size());
    EVP_DigestUpdate(ctx, "\0", 1);
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::vector<ChatMessage> render_system_context(const PromptBundle& bundle,
                                               const RoleContext& ctx) {
  const bool informed = ctx.role != Role::kServant;
  if (informed != ctx.sides.has_value()) {
    throw std::invalid_argument(
        "side knowledge must be given exactly for Merlin and Evil roles");
  }
  std::vector<ChatMessage> out;
  out.push_back({"system", bundle.rules});
  out.push_back({"system", bundle.role.render(
                               {{"id", std::to_string(ctx.seat)},
                                {"role", std::string(role_name(ctx.role))},
                                {"side", std::string(side_name(
                                             side_of(ctx.role)))}})});
  if (informed) {
    std::vector<Seat> evil;
    std::vector<Seat> good;
    for (Seat s = 0; s < static_cast<Seat>(ctx.sides->size()); ++s) {
      ((*ctx.sides)[s] == Side::kEvil ? evil : good).push_back(s);
    }
    out.push_back({"system", bundle.reveal.render(
                                 {{"evil_players", seat_list(evil)},
                                  {"good_players", seat_list(good)}})});
  }
  return out;
}

std::string render_minutes(const std::vector<Utterance>& minutes) {
  std::string out;
  for (const Utterance& u : minutes) {
    if (!out.empty()) out += '\n';
    out += fmt::format("Player {}: {}", u.seat, u.text);
  }
  return out;
}

std::string render_request(const PromptBundle& bundle, Phase phase,
                           int num_players, int team_size,
                           const std::optional<Team>& team) {
  const std::string max_id = std::to_string(num_players - 1);
  switch (phase) {
    case Phase::kTeamSelection:
      return bundle.request_team_selection.render(
          {{"team_size", std::to_string(team_size)}, {"max_id", max_id}});
    case Phase::kTeamVoting:
      return bundle.request_team_vote.render({{"team", team->to_string()}});
    case Phase::kQuest:
      return bundle.request_quest.render({{"team", team->to_string()}});
    case Phase::kAssassination:
      return bundle.request_assassination.render({{"max_id", max_id}});
    case Phase::kTerminal:
      break;
  }
  throw std::invalid_argument("no request for a finished game");
}

std::string render_parse(const PromptBundle& bundle, Phase phase) {
  switch (phase) {
    case Phase::kTeamSelection:
      return bundle.parse_team_selection.render({});
    case Phase::kTeamVoting:
      return bundle.parse_team_vote.render({});
    case Phase::kQuest:
      return bundle.parse_quest.render({});
    case Phase::kAssassination:
      return bundle.parse_assassination.render({});
    case Phase::kTerminal:
      break;
  }
  throw std::invalid_argument("no parse prompt for a finished game");
}

std::string render_probe(const PromptBundle& bundle, int num_players) {
  return bundle.probe.render({{"max_id", std::to_string(num_players - 1)}});
}

std::string render_probe_parse(const PromptBundle& bundle, int num_players) {
  std::string slots;
  for (int i = 0; i < num_players; ++i) {
    if (i > 0) slots += ", ";
    slots += fmt::format("{}: score_for_{}", i, i);
  }
  return bundle.probe_parse.render(
      {{"max_id", std::to_string(num_players - 1)}, {"score_slots", slots}});
}

std::string render_outcome(const PromptBundle& bundle,
                           const MissionRecord& record) {
  return bundle.outcome.render(
      {{"quest", std::to_string(record.mission_index + 1)},
       {"team", record.team.to_string()},
       {"result", record.outcome == MissionOutcome::kSuccess ? "succeeded"
                                                              : "failed"},
       {"fails", std::to_string(record.fail_votes)}});
}

std::string render_discussion(const PromptBundle& bundle, Seat leader,
                              Seat seat, const std::vector<Utterance>& earlier) {
  auto opening = std::find_if(earlier.begin(), earlier.end(),
                              [leader](const Utterance& u) {
                                return u.seat == leader;
                              });
  if (seat == leader && opening == earlier.end()) {
    return bundle.discuss_leader.render({});
  }
  std::string others;
  for (auto it = earlier.begin(); it != earlier.end(); ++it) {
    if (it == opening) continue;
    if (!others.empty()) others += ' ';
    others += fmt::format("Player {}: {}", it->seat, it->text);
  }
  // The template closes each quotation with its own period.
  auto unterminated = [](std::string s) {
    while (!s.empty() && (s.back() == ' ' || s.back() == '\n')) s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
  };
  return bundle.discuss_player.render(
      {{"player_id", std::to_string(leader)},
       {"statements_from_leader",
        opening == earlier.end() ? "" : unterminated(opening->text)},
       {"discussions", others.empty() ? "none" : unterminated(others)}});
}

}  // namespace avalon
