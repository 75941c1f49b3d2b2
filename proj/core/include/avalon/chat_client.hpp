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

#pragma once

#include <chrono>
#include <functional>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "avalon/prompts.hpp"

namespace avalon {

/// Missing or rejected API credential. Never retried.
class CredentialError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The endpoint could not be reached or kept failing after retries.
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EndpointConfig {
  /// Prefix of the chat-completions route, e.g. "https://api.openai.com/v1".
  std::string base_url = "https://api.openai.com/v1";
  std::string model = "gpt-3.5-turbo";
  double temperature = 0.1;
  /// Attempts after the first one, for 429, 5xx and connection errors.
  int max_retries = 4;
  std::chrono::milliseconds timeout{60000};
  std::chrono::milliseconds backoff{500};
  /// Environment variable holding the bearer token. Empty means no auth.
  std::string credential_env = "OPENAI_API_KEY";
};

void to_json(nlohmann::json& j, const EndpointConfig& c);
/// Missing fields keep their defaults.
void from_json(const nlohmann::json& j, EndpointConfig& c);

struct TraceEntry {
  std::vector<ChatMessage> request;
  std::string response;
};
using TraceSink = std::function<void(const TraceEntry&)>;

class ChatClient {
 public:
  virtual ~ChatClient() = default;
  /// Returns the assistant text. Throws CredentialError or TransportError.
  virtual std::string complete(const std::vector<ChatMessage>& messages) = 0;
};

/// Speaks the chat-completions JSON protocol over HTTP(S).
/// Safe to share across threads.
class HttpChatClient : public ChatClient {
 public:
  explicit HttpChatClient(EndpointConfig config);

  void set_trace(TraceSink sink);
  std::string complete(const std::vector<ChatMessage>& messages) override;

  const EndpointConfig& config() const { return config_; }

 private:
  EndpointConfig config_;
  std::string origin_;
  std::string path_;
  std::mutex trace_mu_;
  TraceSink trace_;
};

/// Answers from a callback; used for offline runs and tests.
class FunctionChatClient : public ChatClient {
 public:
  using Fn = std::function<std::string(const std::vector<ChatMessage>&)>;
  explicit FunctionChatClient(Fn fn) : fn_(std::move(fn)) {}
  std::string complete(const std::vector<ChatMessage>& messages) override {
    return fn_(messages);
  }

 private:
  Fn fn_;
};

}  // namespace avalon
