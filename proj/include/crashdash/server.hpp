// Copyright 2026 The crashdash Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>

#include "crashdash/api.hpp"
#include "crashdash/config.hpp"
#include "crashdash/snapshot.hpp"

namespace crashdash {

// Bodies of successful GETs for one snapshot, keyed by canonical query.
class ResponseCache {
 public:
  explicit ResponseCache(std::size_t capacity = 512) : capacity_(capacity) {}

  std::optional<api::Response> lookup(const std::string& key) const;
  void store(const std::string& key, const api::Response& response);

 private:
  mutable std::mutex mu_;
  std::size_t capacity_;
  std::unordered_map<std::string, api::Response> entries_;
};

// The served snapshot. Readers copy the pointer pair under a short lock and
// then work lock-free; publish swaps snapshot and cache together.
class SnapshotStore {
 public:
  struct View {
    std::shared_ptr<const DatasetSnapshot> snapshot;
    std::shared_ptr<ResponseCache> cache;
  };

  View current() const;
  void publish(std::shared_ptr<const DatasetSnapshot> snapshot);

 private:
  mutable std::mutex mu_;
  View view_{nullptr, std::make_shared<ResponseCache>()};
};

// One JSON line on stderr: {"ts":..., "event":..., ...fields}.
void log_event(std::string_view event, const Json& fields = Json::object());

class Server {
 public:
  struct Hooks {
    // Called on a worker thread before a GET is answered.
    std::function<void(std::string_view path)> on_request;
  };

  Server(ServiceConfig config, std::shared_ptr<SnapshotStore> store, Hooks hooks = {});
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds the configured address (port 0 picks a free port). False when the
  // address cannot be bound.
  bool bind();
  int port() const;
  // Serves until stop(); in-flight requests complete before it returns.
  void run();
  void stop();
  bool running() const;

  // POST /api/v1/admin/reload without the transport.
  api::Response reload(std::string_view body, std::string_view presented_token);
  api::Response get(std::string_view path, const api::Params& params) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace crashdash
