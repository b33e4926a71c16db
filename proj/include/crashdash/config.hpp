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
#include <filesystem>
#include <functional>
#include <optional>
#include <string>

namespace crashdash {

struct ServiceConfig {
  std::string listen_addr = "127.0.0.1:8080";
  std::string admin_token;  // empty disables /admin/reload
  std::filesystem::path data_dir = "data";
  double default_cell_size = 0.01;
  int default_radius = 1;
  std::string cors_origin;  // empty: no CORS headers
  std::size_t page_size = 5000;

  std::string host() const;
  int port() const;
};

using EnvLookup = std::function<std::optional<std::string>(const char*)>;

/// Reads the optional JSON config file, then applies LISTEN_ADDR,
/// ADMIN_TOKEN, DATA_DIR, DEFAULT_CELL_SIZE and CORS_ORIGIN from the
/// environment. Throws InvalidArgument naming the bad setting.
ServiceConfig load_config(const std::optional<std::filesystem::path>& file);
ServiceConfig load_config(const std::optional<std::filesystem::path>& file, const EnvLookup& env);

}  // namespace crashdash
