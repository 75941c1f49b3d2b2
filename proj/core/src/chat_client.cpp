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

#include "avalon/chat_client.hpp"

#include <cstdlib>
#include <thread>

#include <fmt/format.h>
#include <httplib.h>
#include <nlohmann/json.hpp>

namespace avalon {

using nlohmann::json;

void to_json(json& j, const EndpointConfig& c) {
  j = json{{"base_url", c.base_url},
           {"model", c.model},
           {"temperature", c.temperature},
           {"max_retries", c.max_retries},
           {"timeout_ms", c.timeout.count()},
           {"backoff_ms", c.backoff.count()},
           {"credential_env", c.credential_env}};
}

void from_json(const json& j, EndpointConfig& c) {
  EndpointConfig out;
  out.base_url = j.value("base_url", out.base_url);
  out.model = j.value("model", out.model);
  out.temperature = j.value("temperature", out.temperature);
  out.max_retries = j.value("max_retries", out.max_retries);
  out.timeout = std::chrono::milliseconds(
      j.value("timeout_ms", static_cast<std::int64_t>(out.timeout.count())));
  out.backoff = std::chrono::milliseconds(
      j.value("backoff_ms", static_cast<std::int64_t>(out.backoff.count())));
  out.credential_env = j.value("credential_env", out.credential_env);
  c = std::move(out);
}

HttpChatClient::HttpChatClient(EndpointConfig config)
    : config_(std::move(config)) {
  const auto scheme_end = config_.base_url.find("://");
  if (scheme_end == std::string::npos) {
    throw std::invalid_argument("base_url needs a scheme: " + config_.base_url);
  }
  const auto path_start = config_.base_url.find('/', scheme_end + 3);
  origin_ = config_.base_url.substr(0, path_start);
  path_ = path_start == std::string::npos ? ""
                                          : config_.base_url.substr(path_start);
  while (!path_.empty() && path_.back() == '/') path_.pop_back();
  path_ += "/chat/completions";
}

void HttpChatClient::set_trace(TraceSink sink) {
  std::lock_guard lock(trace_mu_);
  trace_ = std::move(sink);
}

std::string HttpChatClient::complete(const std::vector<ChatMessage>& messages) {
  std::string token;
  if (!config_.credential_env.empty()) {
    const char* value = std::getenv(config_.credential_env.c_str());
    if (value == nullptr || *value == '\0') {
      throw CredentialError(fmt::format("environment variable {} is not set",
                                        config_.credential_env));
    }
    token = value;
  }

  json body{{"model", config_.model}, {"temperature", config_.temperature}};
  body["messages"] = json::array();
  for (const auto& m : messages) {
    body["messages"].push_back({{"role", m.role}, {"content", m.content}});
  }
  const std::string payload = body.dump();

  httplib::Client client(origin_);
  client.set_connection_timeout(config_.timeout);
  client.set_read_timeout(config_.timeout);
  client.set_write_timeout(config_.timeout);
  if (!token.empty()) client.set_bearer_token_auth(token);

  std::string last_error;
  auto delay = config_.backoff;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(delay);
      delay *= 2;
    }
    auto res = client.Post(path_, payload, "application/json");
    if (!res) {
      last_error = "connection failed: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 401 || res->status == 403) {
      throw CredentialError(fmt::format("endpoint refused credentials ({})",
                                        res->status));
    }
    if (res->status == 429 || res->status >= 500) {
      last_error = fmt::format("HTTP {}", res->status);
      continue;
    }
    if (res->status != 200) {
      throw TransportError(fmt::format("HTTP {}: {}", res->status, res->body));
    }
    std::string text;
    try {
      const json reply = json::parse(res->body);
      text = reply.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
      throw TransportError(std::string("malformed completion: ") + e.what());
    }
    std::lock_guard lock(trace_mu_);
    if (trace_) trace_(TraceEntry{messages, text});
    return text;
  }
  throw TransportError(fmt::format("gave up after {} attempts: {}",
                                   config_.max_retries + 1, last_error));
}

}  // namespace avalon
