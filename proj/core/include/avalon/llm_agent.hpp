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

// A player backed by a chat model.
//
// Every call is stateless: the full context (rules, role, reveal, running
// summary, current minutes, request) is rebuilt from scratch. Actions go
// through two completions, one to reason and one to extract a templated
// answer; a local reader of the first reply backs up the second. After each
// mission the model rewrites its summary from the previous summary, the
// round's minutes and the outcome, which keeps prompts bounded.

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "avalon/agent.hpp"
#include "avalon/chat_client.hpp"
#include "avalon/llm_parse.hpp"
#include "avalon/prompts.hpp"

namespace avalon {

struct LlmAgentOptions {
  /// Summaries longer than this many characters keep only their tail.
  std::size_t summary_char_cap = 4000;
  /// Bound on the estimated tokens (characters / 4) of any prompt.
  std::size_t token_cap = 3500;
};

/// Rough token count used for context bounding.
std::size_t estimate_tokens(const std::vector<ChatMessage>& messages);

class LlmAgent : public Agent {
 public:
  /// `parser` may be null, in which case answers are read locally only.
  LlmAgent(std::shared_ptr<ChatClient> actor, std::shared_ptr<ChatClient> parser,
           const PromptBundle& bundle = PromptBundle::builtin(),
           LlmAgentOptions options = {});

  std::string kind() const override { return "llm"; }
  void start(const Observation& obs) override;
  Action decide(const Observation& obs) override;
  std::string speak(const Observation& obs) override;
  std::vector<double> probe_sides(const Observation& obs) override;
  void on_event(const GameEvent& event) override;
  void on_mission_result(const Observation& obs,
                         const MissionRecord& record) override;
  std::vector<event::AgentAnomaly> take_anomalies() override;

  const std::string& summary() const { return summary_; }
  int summary_turn() const { return summary_turn_; }

  /// The message list for an action request; exposed for inspection.
  std::vector<ChatMessage> action_messages(const Observation& obs) const;

  /// Reads an action out of a reply: parser answer line, then the local
  /// reader. Empty when neither succeeds.
  std::optional<Action> read_action(const std::string& raw,
                                    const ParseContext& ctx);

 private:
  std::vector<ChatMessage> context(const Observation& obs,
                                   const std::vector<Utterance>& minutes,
                                   std::vector<std::string> tail) const;
  std::string ask(ChatClient& client, const std::vector<ChatMessage>& messages);
  void note(Seat seat, const std::string& kind, const std::string& detail);

  std::shared_ptr<ChatClient> actor_;
  std::shared_ptr<ChatClient> parser_;
  PromptBundle bundle_;
  LlmAgentOptions options_;
  std::optional<RoleContext> role_;
  std::string summary_;
  int summary_turn_ = 0;
  /// Everything said since the last recap.
  std::vector<Utterance> round_minutes_;
  std::vector<event::AgentAnomaly> anomalies_;
};

}  // namespace avalon
