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
#include <memory>
#include <string>

#include "avalon/gateway.hpp"

namespace avalon::gateway {

struct HttpOptions {
  std::string host = "127.0.0.1";
  /// 0 picks a free port.
  int port = 8080;
  std::chrono::milliseconds heartbeat{15000};
  std::chrono::milliseconds tick_interval{250};
};

/// HTTP/JSON endpoints and server-sent event streams over a SessionManager.
///
///   POST /games                                   create (no auth)
///   GET  /games/{id}                              lobby status (no auth)
///   POST /games/{id}/seats/{seat}/join            seat token
///   GET  /games/{id}/seats/{seat}/observation     seat token
///   POST /games/{id}/seats/{seat}/action          seat token
///   POST /games/{id}/seats/{seat}/chat            seat token
///   GET  /games/{id}/seats/{seat}/events          seat token, SSE
///   GET  /games/{id}/spectate                     spectator token
///   GET  /games/{id}/events                       spectator token, SSE
///
/// Tokens travel as `Authorization: Bearer <token>`; event streams also
/// accept `?token=` for browser EventSource clients. Streams resume from
/// `?since=<id>` or `Last-Event-ID`, and `?follow=0` returns what is
/// available and closes.
class HttpGateway {
 public:
  HttpGateway(SessionManager& sessions, HttpOptions options = {});
  ~HttpGateway();
  HttpGateway(const HttpGateway&) = delete;
  HttpGateway& operator=(const HttpGateway&) = delete;

  /// Binds the socket and returns the port.
  int bind();
  /// Serves until stop(); binds first if needed.
  void serve();
  /// Serves on a background thread.
  void start();
  void stop();
  int port() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace avalon::gateway
