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

#include "crashdash/config.hpp"

#include <cstdlib>

#include <json.hpp>

#include "crashdash/error.hpp"
#include "crashdash/ingest.hpp"
#include "crashdash/text.hpp"

namespace crashdash {

namespace {

void check(ServiceConfig& c) {
  if (!(c.default_cell_size > 0.0)) throw InvalidArgument("default_cell_size", "must be > 0");
  if (c.default_radius < 0) throw InvalidArgument("default_radius", "must be >= 0");
  if (c.page_size == 0) throw InvalidArgument("page_size", "must be >= 1");
  (void)c.port();
}

}  // namespace

std::string ServiceConfig::host() const {
  auto colon = listen_addr.rfind(':');
  return colon == std::string::npos ? listen_addr : listen_addr.substr(0, colon);
}

int ServiceConfig::port() const {
  auto colon = listen_addr.rfind(':');
  if (colon == std::string::npos) throw InvalidArgument("listen_addr", "expected host:port");
  auto port = text::parse_int(std::string_view(listen_addr).substr(colon + 1));
  if (!port || *port < 0 || *port > 65535) throw InvalidArgument("listen_addr", "bad port");
  return static_cast<int>(*port);
}

ServiceConfig load_config(const std::optional<std::filesystem::path>& file) {
  return load_config(file, [](const char* name) -> std::optional<std::string> {
    if (const char* v = std::getenv(name)) return std::string(v);
    return std::nullopt;
  });
}

ServiceConfig load_config(const std::optional<std::filesystem::path>& file, const EnvLookup& env) {
  ServiceConfig c;
  if (file) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(read_file(*file));
    } catch (const nlohmann::json::exception& e) {
      throw InvalidArgument("config", e.what());
    } catch (const IngestError& e) {
      throw InvalidArgument("config", e.what());
    }
    if (!j.is_object()) throw InvalidArgument("config", "expected a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
      const auto& key = it.key();
      const auto& v = it.value();
      try {
        if (key == "listen_addr") c.listen_addr = v.get<std::string>();
        else if (key == "admin_token") c.admin_token = v.get<std::string>();
        else if (key == "data_dir") c.data_dir = v.get<std::string>();
        else if (key == "default_cell_size") c.default_cell_size = v.get<double>();
        else if (key == "default_radius") c.default_radius = v.get<int>();
        else if (key == "cors_origin") c.cors_origin = v.get<std::string>();
        else if (key == "page_size") c.page_size = v.get<std::size_t>();
        else throw InvalidArgument(key, "unknown config key");
      } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(key, e.what());
      }
    }
  }
  if (auto v = env("LISTEN_ADDR")) c.listen_addr = *v;
  if (auto v = env("ADMIN_TOKEN")) c.admin_token = *v;
  if (auto v = env("DATA_DIR")) c.data_dir = *v;
  if (auto v = env("CORS_ORIGIN")) c.cors_origin = *v;
  if (auto v = env("DEFAULT_CELL_SIZE")) {
    auto d = text::parse_double(*v);
    if (!d) throw InvalidArgument("DEFAULT_CELL_SIZE", "not a number");
    c.default_cell_size = *d;
  }
  check(c);
  return c;
}

}  // namespace crashdash
