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

// Prompt templates for LLM players.
//
// Templates use named placeholders in braces, e.g. "{team_size}"; a literal
// brace is written doubled. Unknown placeholder names are rejected when a
// template is loaded, so a bad bundle never reaches a running game.

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "avalon/game.hpp"

namespace avalon {

class TemplateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PromptTemplate {
 public:
  PromptTemplate() = default;
  /// Throws TemplateError on unknown placeholders or unbalanced braces.
  explicit PromptTemplate(std::string source);

  const std::string& source() const { return source_; }
  /// Placeholder names in order of first use.
  const std::vector<std::string>& placeholders() const { return names_; }

  /// Throws TemplateError if a referenced placeholder has no value.
  std::string render(const std::map<std::string, std::string>& values) const;

 private:
  struct Piece {
    bool placeholder = false;
    std::string text;
  };
  std::string source_;
  std::vector<Piece> pieces_;
  std::vector<std::string> names_;
};

/// Every placeholder name a template may use.
const std::vector<std::string>& known_placeholders();

struct PromptBundle {
  std::string rules;
  PromptTemplate role;
  PromptTemplate reveal;
  PromptTemplate request_team_selection;
  PromptTemplate request_team_vote;
  PromptTemplate request_quest;
  PromptTemplate request_assassination;
  PromptTemplate parse_team_selection;
  PromptTemplate parse_team_vote;
  PromptTemplate parse_quest;
  PromptTemplate parse_assassination;
  PromptTemplate recap;
  PromptTemplate outcome;
  PromptTemplate discuss_leader;
  PromptTemplate discuss_player;
  PromptTemplate probe;
  PromptTemplate probe_parse;

  /// The templates compiled into the library.
  static const PromptBundle& builtin();
  /// Reads "<name>.txt" for every template from `dir`. A single trailing
  /// newline in each file is dropped.
  static PromptBundle load(const std::filesystem::path& dir);
  static PromptBundle from_sources(const std::map<std::string, std::string>& src);

  /// Template file names, in a fixed order.
  static const std::vector<std::string>& names();
  /// Source text by file name.
  std::map<std::string, std::string> sources() const;
  /// Hex SHA-256 over every template name and source, in names() order.
  std::string checksum() const;
};

struct ChatMessage {
  std::string role;
  std::string content;
  bool operator==(const ChatMessage&) const = default;
};

/// What the system prompt needs to know about a seat.
struct RoleContext {
  Seat seat = 0;
  Role role = Role::kServant;
  int num_players = 5;
  /// Sides of every seat, for Merlin and Evil roles.
  std::optional<std::vector<Side>> sides;
};

/// Rules, role and (for informed roles) the reveal, as system messages.
std::vector<ChatMessage> render_system_context(const PromptBundle& bundle,
                                               const RoleContext& ctx);

/// "Player k: text" lines.
std::string render_minutes(const std::vector<Utterance>& minutes);

/// The action request for the current phase. `team` is needed for voting
/// and questing.
std::string render_request(const PromptBundle& bundle, Phase phase,
                           int num_players, int team_size,
                           const std::optional<Team>& team);

/// The parse instruction matching render_request for the same phase.
std::string render_parse(const PromptBundle& bundle, Phase phase);

std::string render_probe(const PromptBundle& bundle, int num_players);
std::string render_probe_parse(const PromptBundle& bundle, int num_players);
std::string render_outcome(const PromptBundle& bundle,
                           const MissionRecord& record);

/// Leader's opening prompt when `earlier` is empty and `seat` leads;
/// otherwise the reply prompt quoting the leader and later speakers.
std::string render_discussion(const PromptBundle& bundle, Seat leader,
                              Seat seat, const std::vector<Utterance>& earlier);

}  // namespace avalon
