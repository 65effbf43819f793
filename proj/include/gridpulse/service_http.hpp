// Copyright 2026 The GridPulse Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GRIDPULSE_SERVICE_HTTP_HPP
#define GRIDPULSE_SERVICE_HTTP_HPP

#include <functional>
#include <map>
#include <string>

#include "httplib.h"

#include "gridpulse/service.hpp"

namespace gridpulse {

// Binds the service to an httplib server. Every GET/POST path goes through
// AnalysisService::handle.
inline void bind_routes(httplib::Server& server, AnalysisService& service) {
  auto forward = [&service](const httplib::Request& req, httplib::Response& res) {
    std::map<std::string, std::string> query;
    for (const auto& [k, v] : req.params) query.emplace(k, v);  // first value wins
    auto out = service.handle(req.method, req.path, query, req.body);
    res.status = out.status;
    res.set_content(out.body, "application/json");
  };
  server.Get(R"(/.*)", forward);
  server.Post(R"(/.*)", forward);
}

// Blocks until the server stops. `on_ready` runs once the socket is bound.
inline bool serve(AnalysisService& service, const std::string& host, int port,
                  const std::function<void(int)>& on_ready = {}) {
  httplib::Server server;
  bind_routes(server, service);
  int bound = port;
  if (port == 0) {
    bound = server.bind_to_any_port(host);
    if (bound < 0) return false;
  } else if (!server.bind_to_port(host, port)) {
    return false;
  }
  if (on_ready) on_ready(bound);
  return server.listen_after_bind();
}

}  // namespace gridpulse

#endif  // GRIDPULSE_SERVICE_HTTP_HPP
