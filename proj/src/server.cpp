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

#include "crashdash/server.hpp"

#include <cstdio>

#include <httplib.h>

#include "crashdash/error.hpp"
#include "crashdash/ingest.hpp"
#include "crashdash/report.hpp"

namespace crashdash {

std::optional<api::Response> ResponseCache::lookup(const std::string& key) const {
  std::lock_guard lock(mu_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void ResponseCache::store(const std::string& key, const api::Response& response) {
  std::lock_guard lock(mu_);
  if (entries_.size() >= capacity_) entries_.clear();
  entries_.emplace(key, response);
}

SnapshotStore::View SnapshotStore::current() const {
  std::lock_guard lock(mu_);
  return view_;
}

void SnapshotStore::publish(std::shared_ptr<const DatasetSnapshot> snapshot) {
  View next{std::move(snapshot), std::make_shared<ResponseCache>()};
  std::lock_guard lock(mu_);
  view_ = std::move(next);
}

void log_event(std::string_view event, const Json& fields) {
  Json j;
  j["ts"] = current_utc_timestamp();
  j["event"] = event;
  for (auto it = fields.begin(); it != fields.end(); ++it) j[it.key()] = it.value();
  const auto line = j.dump() + "\n";
  std::fwrite(line.data(), 1, line.size(), stderr);
}

struct Server::Impl {
  ServiceConfig config;
  std::shared_ptr<SnapshotStore> store;
  Hooks hooks;
  api::Options options;
  httplib::Server http;
  int bound_port = -1;
  std::mutex reload_mu;

  void install_routes(Server& self);
};

namespace {

bool tokens_equal(std::string_view a, std::string_view b) {
  unsigned char diff = a.size() == b.size() ? 0 : 1;
  for (std::size_t i = 0; i < a.size(); ++i) diff |= static_cast<unsigned char>(a[i] ^ (i < b.size() ? b[i] : 0));
  return diff == 0;
}

void send(httplib::Response& res, const api::Response& r) {
  res.status = r.status;
  res.set_content(r.body, r.content_type.c_str());
}

}  // namespace

Server::Server(ServiceConfig config, std::shared_ptr<SnapshotStore> store, Hooks hooks)
    : impl_(std::make_unique<Impl>()) {
  impl_->config = std::move(config);
  impl_->store = std::move(store);
  impl_->hooks = std::move(hooks);
  impl_->options = api::Options::from(impl_->config);
  // httplib's default adds SO_REUSEPORT, which lets a second server share a busy port.
  impl_->http.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof yes);
  });
  impl_->install_routes(*this);
}

Server::~Server() { stop(); }

void Server::Impl::install_routes(Server& self) {
  http.Get(R"(/api/v1/.*)", [this, &self](const httplib::Request& req, httplib::Response& res) {
    api::Params params;
    for (const auto& [key, value] : req.params) {
      if (!params.emplace(key, value).second) {
        send(res, api::error(400, "invalid_param", "parameter given more than once", key));
        return;
      }
    }
    if (hooks.on_request) hooks.on_request(req.path);
    send(res, self.get(req.path, params));
  });

  http.Post("/api/v1/admin/reload", [&self](const httplib::Request& req, httplib::Response& res) {
    std::string token = req.get_header_value("X-Admin-Token");
    const auto auth = req.get_header_value("Authorization");
    if (token.empty() && auth.rfind("Bearer ", 0) == 0) token = auth.substr(7);
    send(res, self.reload(req.body, token));
  });

  http.Options(R"(/api/v1/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  http.set_post_routing_handler([this](const httplib::Request&, httplib::Response& res) {
    if (!config.cors_origin.empty()) {
      res.set_header("Access-Control-Allow-Origin", config.cors_origin);
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type, Authorization, X-Admin-Token");
    }
  });

  http.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return;
    const auto r = res.status == 404 ? api::error(404, "not_found", "no such endpoint")
                                     : api::error(res.status, "http_error", "request failed");
    res.set_content(r.body, r.content_type.c_str());
  });
}

bool Server::bind() {
  const auto host = impl_->config.host();
  const int port = impl_->config.port();
  if (port == 0) {
    impl_->bound_port = impl_->http.bind_to_any_port(host);
    return impl_->bound_port > 0;
  }
  if (!impl_->http.bind_to_port(host, port)) return false;
  impl_->bound_port = port;
  return true;
}

int Server::port() const { return impl_->bound_port; }

void Server::run() {
  log_event("server_start", Json{{"listen_addr", impl_->config.host() + ":" + std::to_string(port())}});
  impl_->http.listen_after_bind();
  log_event("server_stop");
}

void Server::stop() {
  if (impl_->http.is_running()) impl_->http.stop();
}

bool Server::running() const { return impl_->http.is_running(); }

api::Response Server::get(std::string_view path, const api::Params& params) const {
  const auto view = impl_->store->current();
  if (!view.snapshot) return api::handle_get(nullptr, path, params, impl_->options);
  const auto key = api::canonical_query(path, params);
  if (auto hit = view.cache->lookup(key)) return *hit;
  auto response = api::handle_get(view.snapshot.get(), path, params, impl_->options);
  if (response.status == 200) view.cache->store(key, response);
  return response;
}

api::Response Server::reload(std::string_view body, std::string_view presented_token) {
  const auto& config = impl_->config;
  if (config.admin_token.empty() || !tokens_equal(presented_token, config.admin_token)) {
    return api::error(401, "unauthorized", "missing or wrong admin token");
  }
  std::string paths[3];
  static constexpr const char* kKeys[3] = {"crash_csv_path", "persons_csv_path", "boundaries_path"};
  try {
    const auto j = nlohmann::json::parse(body);
    if (!j.is_object()) return api::error(400, "invalid_param", "expected a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
      bool known = false;
      for (const char* k : kKeys) known = known || it.key() == k;
      if (!known) return api::error(400, "invalid_param", "unknown field", it.key());
    }
    for (int i = 0; i < 3; ++i) {
      if (!j.contains(kKeys[i]) || !j[kKeys[i]].is_string()) {
        if (i == 2 && !j.contains(kKeys[i])) continue;
        return api::error(400, "invalid_param", "expected a string path", std::string(kKeys[i]));
      }
      paths[i] = j[kKeys[i]].get<std::string>();
    }
  } catch (const nlohmann::json::exception& e) {
    return api::error(400, "invalid_param", std::string("malformed JSON body: ") + e.what());
  }

  std::lock_guard lock(impl_->reload_mu);
  const auto old = impl_->store->current().snapshot;
  try {
    SnapshotSources sources;
    sources.crash_csv = read_file(paths[0]);
    sources.person_csv = paths[1].empty() ? std::string() : read_file(paths[1]);
    sources.boundaries_geojson = paths[2].empty() ? std::string() : read_file(paths[2]);
    auto snapshot = DatasetSnapshot::build(sources);
    const auto& report = snapshot->ingest_report();
    if (report.crashes.accepted_count == 0 && report.crashes.data_rows > 0) {
      auto r = api::error(422, "ingest_failed", "every crash row was rejected");
      auto j = Json::parse(r.body);
      j["report"] = ingest_report_to_json(report);
      r.body = j.dump(2) + "\n";
      log_event("reload_failed", Json{{"message", "every crash row was rejected"}});
      return r;
    }
    if (!config.data_dir.empty()) {
      try {
        save_snapshot(config.data_dir, sources, *snapshot);
      } catch (const std::exception& e) {
        log_event("persist_failed", Json{{"message", e.what()}});
      }
    }
    impl_->store->publish(snapshot);
    log_event("reload", Json{{"snapshot_id", snapshot->id()},
                             {"previous", old ? Json(old->id()) : Json(nullptr)},
                             {"record_count", snapshot->info().record_count}});
    return {200, api::snapshot_body(*snapshot), "application/json"};
  } catch (const IngestError& e) {
    log_event("reload_failed", Json{{"message", e.what()}});
    return api::error(422, "ingest_failed", e.what());
  } catch (const BoundaryError& e) {
    log_event("reload_failed", Json{{"message", e.what()}});
    return api::error(422, "ingest_failed", e.what());
  }
}

}  // namespace crashdash
