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

#include "avalon/llm_agent.hpp"

#include <fmt/format.h>

namespace avalon {

std::size_t estimate_tokens(const std::vector<ChatMessage>& messages) {
  std::size_t chars = 0;
  for (const auto& m : messages) chars += m.content.size();
  return (chars + 3) / 4;
}

LlmAgent::LlmAgent(std::shared_ptr<ChatClient> actor,
                   std::shared_ptr<ChatClient> parser,
                   const PromptBundle& bundle, LlmAgentOptions options)
    : actor_(std::move(actor)), parser_(std::move(parser)), bundle_(bundle),
      options_(options) {
  if (!actor_) throw std::invalid_argument("an LLM agent needs a client");
}

void LlmAgent::start(const Observation& obs) {
  role_ = RoleContext{obs.seat, obs.role, obs.num_players, obs.side_knowledge};
  summary_.clear();
  summary_turn_ = 0;
  round_minutes_.clear();
}

std::vector<ChatMessage> LlmAgent::context(const Observation& obs,
                                           const std::vector<Utterance>& minutes,
                                           std::vector<std::string> tail) const {
  const RoleContext role =
      role_ ? *role_
            : RoleContext{obs.seat, obs.role, obs.num_players, obs.side_knowledge};
  const auto system = render_system_context(bundle_, role);

  std::string summary = summary_;
  std::size_t first_minute = 0;
  for (;;) {
    std::vector<ChatMessage> out = system;
    if (!summary.empty()) out.push_back({"user", summary});
    const std::vector<Utterance> kept(minutes.begin() + first_minute,
                                      minutes.end());
    if (!kept.empty()) out.push_back({"user", render_minutes(kept)});
    for (const auto& t : tail) out.push_back({"user", t});

    const std::size_t tokens = estimate_tokens(out);
    if (tokens <= options_.token_cap) return out;
    if (first_minute < minutes.size()) {
      ++first_minute;
    } else if (!summary.empty()) {
      const std::size_t excess = (tokens - options_.token_cap) * 4;
      summary.erase(0, std::min(summary.size(), excess));
    } else {
      return out;
    }
  }
}

std::vector<ChatMessage> LlmAgent::action_messages(const Observation& obs) const {
  return context(obs, obs.minutes,
                 {render_request(bundle_, obs.phase, obs.num_players,
                                 obs.current_team_size(), obs.current_team)});
}

std::string LlmAgent::ask(ChatClient& client,
                          const std::vector<ChatMessage>& messages) {
  try {
    return client.complete(messages);
  } catch (const CredentialError&) {
    throw;
  } catch (const std::exception& e) {
    throw AgentFailure(e.what());
  }
}

void LlmAgent::note(Seat seat, const std::string& kind,
                    const std::string& detail) {
  anomalies_.push_back(event::AgentAnomaly{seat, kind, detail});
}

std::optional<Action> LlmAgent::read_action(const std::string& raw,
                                            const ParseContext& ctx) {
  const std::vector<ChatMessage> parse_request{
      {"user", raw}, {"user", render_parse(bundle_, ctx.phase)}};
  if (parser_) {
    if (auto a = parse_answer_line(ask(*parser_, parse_request), ctx)) return a;
  }
  if (auto a = fallback_parse(raw, ctx)) return a;
  if (parser_) {
    if (auto a = parse_answer_line(ask(*parser_, parse_request), ctx)) return a;
  }
  return std::nullopt;
}

Action LlmAgent::decide(const Observation& obs) {
  if (!role_) start(obs);
  const ParseContext ctx{obs.phase, obs.num_players, obs.current_team_size(),
                         obs.seat};
  const auto messages = action_messages(obs);
  const std::string raw = ask(*actor_, messages);
  if (auto a = read_action(raw, ctx)) return *a;
  if (!parser_) {
    if (auto a = fallback_parse(ask(*actor_, messages), ctx)) return *a;
  }
  throw AgentFailure("could not read an action from: " + raw);
}

std::string LlmAgent::speak(const Observation& obs) {
  if (!role_) start(obs);
  const Seat leader =
      obs.discussion_order.empty() ? obs.leader : obs.discussion_order.front();
  const std::string prompt =
      render_discussion(bundle_, leader, obs.seat, obs.minutes);
  try {
    const std::string text =
        ask(*actor_, context(obs, obs.minutes, {prompt}));
    return clip_sentences(text, obs.discussion_sentence_limit);
  } catch (const AgentFailure& e) {
    note(obs.seat, "discussion_failed", e.what());
    return {};
  }
}

std::vector<double> LlmAgent::probe_sides(const Observation& obs) {
  if (!role_) start(obs);
  const std::vector<double> unsure(static_cast<std::size_t>(obs.num_players),
                                   0.5);
  try {
    const std::string raw = ask(
        *actor_, context(obs, obs.minutes, {render_probe(bundle_, obs.num_players)}));
    if (parser_) {
      const std::string answer =
          ask(*parser_, {{"user", raw},
                         {"user", render_probe_parse(bundle_, obs.num_players)}});
      if (auto p = parse_probe_answer(answer, obs.num_players)) return *p;
    }
    if (auto p = fallback_probe(raw, obs.num_players)) return *p;
    note(obs.seat, "probe_unparsed", raw);
  } catch (const AgentFailure& e) {
    note(obs.seat, "probe_failed", e.what());
  }
  return unsure;
}

void LlmAgent::on_event(const GameEvent& event) {
  if (const auto* spoke = std::get_if<event::Spoke>(&event)) {
    round_minutes_.push_back(Utterance{spoke->seat, spoke->text});
  }
}

void LlmAgent::on_mission_result(const Observation& obs,
                                 const MissionRecord& record) {
  if (!role_) start(obs);
  std::vector<ChatMessage> messages = render_system_context(bundle_, *role_);
  if (!summary_.empty()) messages.push_back({"user", summary_});
  if (!round_minutes_.empty()) {
    messages.push_back({"user", render_minutes(round_minutes_)});
  }
  messages.push_back({"user", render_outcome(bundle_, record)});
  messages.push_back({"user", bundle_.recap.render({})});
  round_minutes_.clear();
  try {
    std::string next = ask(*actor_, messages);
    if (next.size() > options_.summary_char_cap) {
      next.erase(0, next.size() - options_.summary_char_cap);
    }
    summary_ = std::move(next);
    ++summary_turn_;
  } catch (const AgentFailure& e) {
    note(obs.seat, "recap_failed", e.what());
  }
}

std::vector<event::AgentAnomaly> LlmAgent::take_anomalies() {
  return std::exchange(anomalies_, {});
}

}  // namespace avalon
