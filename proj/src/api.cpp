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

#include "crashdash/api.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <set>

#include "crashdash/error.hpp"
#include "crashdash/text.hpp"

namespace crashdash::api {

Options Options::from(const ServiceConfig& config) {
  return {config.default_cell_size, config.default_radius, config.page_size};
}

Response error(int status, std::string_view code, std::string_view message,
               const std::optional<std::string>& param) {
  Json j;
  j["code"] = code;
  j["message"] = message;
  if (param) j["param"] = *param;
  return {status, j.dump(2) + "\n", "application/json"};
}

// ---------------------------------------------------------------------------
// parameter parsing

namespace {

const std::set<std::string, std::less<>> kFilterKeys = {
    "year_from", "year_to", "tribe_id", "severity_group", "urban_rural",
    "highway_class", "key_factor", "bbox", "crash_type"};

void reject_unknown(const Params& p, std::initializer_list<std::string_view> extra) {
  for (const auto& [key, value] : p) {
    if (kFilterKeys.count(key)) continue;
    if (std::find(extra.begin(), extra.end(), key) != extra.end()) continue;
    throw InvalidArgument(key, "unknown parameter");
  }
}

const std::string* find(const Params& p, std::string_view key) {
  auto it = p.find(key);
  return it == p.end() ? nullptr : &it->second;
}

long long int_param(const Params& p, std::string_view key, long long fallback, long long lo, long long hi) {
  const auto* v = find(p, key);
  if (!v) return fallback;
  auto n = text::parse_int(*v);
  if (!n) throw InvalidArgument(std::string(key), "expected an integer");
  if (*n < lo || *n > hi) {
    throw InvalidArgument(std::string(key), "expected " + std::to_string(lo) + ".." + std::to_string(hi));
  }
  return *n;
}

template <typename T, typename Parse>
T enum_param(const Params& p, std::string_view key, T fallback, Parse parse) {
  const auto* v = find(p, key);
  if (!v) return fallback;
  auto parsed = parse(*v);
  if (!parsed) throw InvalidArgument(std::string(key), "unrecognised value '" + *v + "'");
  return *parsed;
}

BBox parse_bbox(const std::string& text) {
  std::array<double, 4> v{};
  std::size_t start = 0;
  for (int i = 0; i < 4; ++i) {
    auto comma = text.find(',', start);
    if ((i < 3) != (comma != std::string::npos)) throw InvalidArgument("bbox", "expected min_lon,min_lat,max_lon,max_lat");
    auto d = text::parse_double(std::string_view(text).substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (!d) throw InvalidArgument("bbox", "expected four numbers");
    v[static_cast<std::size_t>(i)] = *d;
    start = comma + 1;
  }
  return {v[0], v[1], v[2], v[3]};
}

Scope scope_param(const Params& p) { return enum_param(p, "scope", Scope::statewide, parse_scope); }

}  // namespace

QueryFilter parse_filter(const Params& p) {
  QueryFilter f;
  if (find(p, "year_from")) f.year_from = static_cast<int>(int_param(p, "year_from", 0, 1900, 2999));
  if (find(p, "year_to")) f.year_to = static_cast<int>(int_param(p, "year_to", 0, 1900, 2999));
  if (const auto* v = find(p, "tribe_id")) {
    if (text::trim(*v).empty()) throw InvalidArgument("tribe_id", "empty");
    f.tribe_id = std::string(text::trim(*v));
  }
  if (find(p, "severity_group")) {
    f.severity_group = enum_param(p, "severity_group", SeverityGroup::ALL, parse_severity_group);
  }
  if (const auto* v = find(p, "urban_rural")) {
    auto u = parse_urban_rural(*v);
    if (u == UrbanRural::unknown) throw InvalidArgument("urban_rural", "expected urban or rural");
    f.urban_rural = u;
  }
  if (find(p, "highway_class")) {
    f.highway_class = enum_param(p, "highway_class", HighwayClass::highway, parse_highway_class);
  }
  if (find(p, "key_factor")) f.key_factor = enum_param(p, "key_factor", KeyFactor::speeding, parse_key_factor);
  if (const auto* v = find(p, "bbox")) f.bbox = parse_bbox(*v);
  if (const auto* v = find(p, "crash_type")) f.crash_type = *v;
  f.validate();
  return f;
}

SummaryRequest parse_summary(const Params& p) {
  reject_unknown(p, {"scope"});
  return {scope_param(p), parse_filter(p)};
}

BreakdownRequest parse_breakdown(const Params& p) {
  reject_unknown(p, {"dimension", "scope", "attribution", "age_bins"});
  BreakdownRequest r;
  if (!find(p, "dimension")) throw InvalidArgument("dimension", "required");
  r.dimension = enum_param(p, "dimension", Dimension::sex, parse_dimension);
  r.scope = scope_param(p);
  r.filter = parse_filter(p);
  r.options.attribution = enum_param(p, "attribution", PersonAttribution::primary_person, parse_attribution);
  if (const auto* v = find(p, "age_bins")) {
    if (*v == "standard") {
      r.options.age_bins = AgeBins::standard();
    } else if (*v == "as_printed") {
      r.options.age_bins = AgeBins::overlapping_as_printed();
    } else {
      throw InvalidArgument("age_bins", "expected standard or as_printed");
    }
  }
  return r;
}

RoadRequest parse_road(const Params& p) {
  reject_unknown(p, {"scope"});
  return {scope_param(p), parse_filter(p)};
}

RankingsRequest parse_rankings(const Params& p) {
  reject_unknown(p, {});
  return {parse_filter(p)};
}

CrashTypesRequest parse_crash_types(const Params& p) {
  reject_unknown(p, {"n", "weight"});
  CrashTypesRequest r;
  r.n = static_cast<int>(int_param(p, "n", 10, 1, 1000));
  r.weight = enum_param(p, "weight", CrashTypeWeight::total, parse_crash_type_weight);
  r.filter = parse_filter(p);
  return r;
}

HotspotsRequest parse_hotspots(const Params& p, const Options& options) {
  reject_unknown(p, {"scope", "cell", "radius", "cells"});
  HotspotsRequest r;
  r.scope = scope_param(p);
  r.filter = parse_filter(p);
  r.params.cell_size = options.default_cell_size;
  if (const auto* v = find(p, "cell")) {
    auto d = text::parse_double(*v);
    if (!d || !(*d > 0.0)) throw InvalidArgument("cell", "expected a positive number");
    r.params.cell_size = *d;
  }
  r.params.radius = static_cast<int>(int_param(p, "radius", options.default_radius, 0, 100));
  r.cells = enum_param(p, "cells", CellSelection::nonempty, parse_cell_selection);
  return r;
}

CrashesRequest parse_crashes(const Params& p, const Options& options) {
  reject_unknown(p, {"scope", "cursor", "limit"});
  CrashesRequest r;
  r.scope = scope_param(p);
  r.filter = parse_filter(p);
  if (const auto* v = find(p, "cursor")) {
    auto n = text::parse_int(*v);
    if (!n || *n < 0) throw InvalidArgument("cursor", "invalid cursor");
    r.cursor = static_cast<std::size_t>(*n);
  }
  r.limit = static_cast<std::size_t>(
      int_param(p, "limit", static_cast<long long>(options.page_size), 1, static_cast<long long>(options.page_size)));
  return r;
}

// ---------------------------------------------------------------------------
// bodies

namespace {

std::string render(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace

Json with_snapshot_id(const DatasetSnapshot& snapshot, const Json& result) {
  Json j;
  j["snapshot_id"] = snapshot.id();
  for (auto it = result.begin(); it != result.end(); ++it) j[it.key()] = it.value();
  return j;
}

std::string snapshot_body(const DatasetSnapshot& snapshot) {
  return render(snapshot_info_to_json(snapshot.info()));
}

std::string summary_body(const DatasetSnapshot& snapshot, const SummaryRequest& r) {
  return render(with_snapshot_id(snapshot, to_json(summarize(snapshot, r.scope, r.filter))));
}

std::string breakdown_body(const DatasetSnapshot& snapshot, const BreakdownRequest& r) {
  return render(with_snapshot_id(snapshot, to_json(breakdown(snapshot, r.dimension, r.scope, r.filter, r.options))));
}

std::string road_body(const DatasetSnapshot& snapshot, const RoadRequest& r) {
  return render(with_snapshot_id(snapshot, to_json(road_table(snapshot, r.scope, r.filter))));
}

std::string rankings_body(const DatasetSnapshot& snapshot, const RankingsRequest& r) {
  return render(with_snapshot_id(snapshot, to_json(tribe_rankings(snapshot, r.filter))));
}

std::string crash_types_body(const DatasetSnapshot& snapshot, const CrashTypesRequest& r) {
  return render(with_snapshot_id(snapshot, to_json(top_crash_types(snapshot, r.n, r.weight, r.filter))));
}

std::string hotspots_body(const DatasetSnapshot& snapshot, const HotspotsRequest& r) {
  const auto result = compute_hotspots(snapshot, r.scope, r.filter, r.params);
  Json j;
  j["snapshot_id"] = snapshot.id();
  j["type"] = "FeatureCollection";
  const auto& g = result.grid;
  Json grid;
  grid["bbox"] = Json::array({g.bbox.min_lon, g.bbox.min_lat, g.bbox.max_lon, g.bbox.max_lat});
  grid["cell_size"] = g.cell_size;
  grid["ncols"] = g.ncols;
  grid["nrows"] = g.nrows;
  grid["radius"] = r.params.radius;
  grid["binned"] = g.binned();
  grid["overflow"] = g.overflow;
  j["grid"] = std::move(grid);
  j["warnings"] = result.warnings;
  j["features"] = hotspots_feature_collection(result, r.cells)["features"];
  return render(j);
}

std::string crashes_body(const DatasetSnapshot& snapshot, const CrashesRequest& r) {
  const auto selected = select_records(snapshot, r.scope, r.filter);
  std::vector<std::size_t> located;
  located.reserve(selected.size());
  for (auto i : selected) {
    if (snapshot.records()[i].location) located.push_back(i);
  }
  Json j;
  j["snapshot_id"] = snapshot.id();
  j["type"] = "FeatureCollection";
  j["total"] = located.size();
  Json features = Json::array();
  const std::size_t begin = std::min(r.cursor, located.size());
  const std::size_t end = begin + std::min(r.limit, located.size() - begin);
  for (std::size_t k = begin; k < end; ++k) {
    const auto i = located[k];
    const auto& rec = snapshot.records()[i];
    Json f;
    f["type"] = "Feature";
    f["geometry"] = Json{{"type", "Point"}, {"coordinates", Json::array({rec.location->lon, rec.location->lat})}};
    const auto& tribe = snapshot.tribe_of(i);
    f["properties"] = Json{{"crash_id", rec.crash_id},
                           {"severity", std::string(1, severity_code(snapshot.severities()[i]))},
                           {"tribe_id", tribe ? Json(*tribe) : Json(nullptr)},
                           {"crash_type", rec.crash_type}};
    features.push_back(std::move(f));
  }
  j["features"] = std::move(features);
  j["next_cursor"] = end < located.size() ? Json(std::to_string(end)) : Json(nullptr);
  return render(j);
}

// ---------------------------------------------------------------------------
// routing

Response handle_get(const DatasetSnapshot* snapshot, std::string_view path, const Params& params,
                    const Options& options) {
  static const std::set<std::string_view> kRoutes = {
      "/api/v1/snapshot",    "/api/v1/summary",     "/api/v1/tribes/rankings", "/api/v1/breakdown",
      "/api/v1/road-types",  "/api/v1/crash-types", "/api/v1/hotspots",        "/api/v1/crashes"};
  if (!kRoutes.count(path)) return error(404, "not_found", "no such endpoint");
  if (!snapshot) return error(503, "no_snapshot", "no snapshot has been ingested");
  try {
    const auto& s = *snapshot;
    std::string body;
    if (path == "/api/v1/snapshot") {
      for (const auto& [key, value] : params) throw InvalidArgument(key, "unknown parameter");
      body = snapshot_body(s);
    } else if (path == "/api/v1/summary") {
      body = summary_body(s, parse_summary(params));
    } else if (path == "/api/v1/tribes/rankings") {
      body = rankings_body(s, parse_rankings(params));
    } else if (path == "/api/v1/breakdown") {
      body = breakdown_body(s, parse_breakdown(params));
    } else if (path == "/api/v1/road-types") {
      body = road_body(s, parse_road(params));
    } else if (path == "/api/v1/crash-types") {
      body = crash_types_body(s, parse_crash_types(params));
    } else if (path == "/api/v1/hotspots") {
      body = hotspots_body(s, parse_hotspots(params, options));
    } else {
      body = crashes_body(s, parse_crashes(params, options));
    }
    return {200, std::move(body), "application/json"};
  } catch (const InvalidArgument& e) {
    return error(400, "invalid_param", e.what(), e.param());
  }
}

namespace {

void append_escaped(std::string& out, std::string_view s) {
  for (char c : s) {
    if (c == '%' || c == '&' || c == '=') {
      char buf[4];
      std::snprintf(buf, sizeof buf, "%%%02X", static_cast<unsigned char>(c));
      out += buf;
    } else {
      out += c;
    }
  }
}

}  // namespace

std::string canonical_query(std::string_view path, const Params& params) {
  std::string key(path);
  char sep = '?';
  for (const auto& [k, v] : params) {
    key += sep;
    append_escaped(key, k);
    key += '=';
    append_escaped(key, v);
    sep = '&';
  }
  return key;
}

}  // namespace crashdash::api
