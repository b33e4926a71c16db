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
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "crashdash/analytics.hpp"
#include "crashdash/config.hpp"
#include "crashdash/hotspot.hpp"
#include "crashdash/report.hpp"
#include "crashdash/snapshot.hpp"

// Transport-free request handling for /api/v1. The HTTP server and the CLI
// both route through here, so a query yields the same body either way.
namespace crashdash::api {

using Params = std::map<std::string, std::string, std::less<>>;

struct Options {
  double default_cell_size = 0.01;
  int default_radius = 1;
  std::size_t page_size = 5000;

  static Options from(const ServiceConfig& config);
};

struct Response {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

// {code, message, param?}; codes: no_snapshot, invalid_param, unauthorized,
// ingest_failed, not_found.
Response error(int status, std::string_view code, std::string_view message,
               const std::optional<std::string>& param = std::nullopt);

// Typed requests. Parsers reject unknown parameter names and malformed
// values with InvalidArgument naming the parameter.
struct SummaryRequest {
  Scope scope = Scope::statewide;
  QueryFilter filter;
};
struct BreakdownRequest {
  Dimension dimension = Dimension::sex;
  Scope scope = Scope::statewide;
  QueryFilter filter;
  BreakdownOptions options;
};
struct RoadRequest {
  Scope scope = Scope::statewide;
  QueryFilter filter;
};
struct RankingsRequest {
  QueryFilter filter;
};
struct CrashTypesRequest {
  int n = 10;
  CrashTypeWeight weight = CrashTypeWeight::total;
  QueryFilter filter;
};
struct HotspotsRequest {
  Scope scope = Scope::statewide;
  QueryFilter filter;
  HotspotParams params;
  CellSelection cells = CellSelection::nonempty;
};
struct CrashesRequest {
  Scope scope = Scope::statewide;
  QueryFilter filter;
  std::size_t cursor = 0;
  std::size_t limit = 0;
};

// The filter keys of `p`; other keys are ignored.
QueryFilter parse_filter(const Params& p);

SummaryRequest parse_summary(const Params& p);
BreakdownRequest parse_breakdown(const Params& p);
RoadRequest parse_road(const Params& p);
RankingsRequest parse_rankings(const Params& p);
CrashTypesRequest parse_crash_types(const Params& p);
HotspotsRequest parse_hotspots(const Params& p, const Options& options);
CrashesRequest parse_crashes(const Params& p, const Options& options);

// Bodies are pretty-printed JSON with snapshot_id as the first member and a
// trailing newline.
std::string snapshot_body(const DatasetSnapshot& snapshot);
std::string summary_body(const DatasetSnapshot& snapshot, const SummaryRequest& r);
std::string breakdown_body(const DatasetSnapshot& snapshot, const BreakdownRequest& r);
std::string road_body(const DatasetSnapshot& snapshot, const RoadRequest& r);
std::string rankings_body(const DatasetSnapshot& snapshot, const RankingsRequest& r);
std::string crash_types_body(const DatasetSnapshot& snapshot, const CrashTypesRequest& r);
std::string hotspots_body(const DatasetSnapshot& snapshot, const HotspotsRequest& r);
std::string crashes_body(const DatasetSnapshot& snapshot, const CrashesRequest& r);

// Wraps a library result the way the endpoints do.
Json with_snapshot_id(const DatasetSnapshot& snapshot, const Json& result);

/// Routes a GET. `snapshot` may be null (503 no_snapshot). Unknown paths are
/// 404 not_found; parameter problems are 400 invalid_param.
Response handle_get(const DatasetSnapshot* snapshot, std::string_view path, const Params& params,
                    const Options& options = {});

// Stable cache key: path plus the sorted parameters.
std::string canonical_query(std::string_view path, const Params& params);

}  // namespace crashdash::api
