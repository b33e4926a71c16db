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

#include "crashdash/dashboard.hpp"

#include <httplib.h>

#include <algorithm>
#include <cstdio>

#include "crashdash/error.hpp"

namespace crashdash::dashboard {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string layers_value(const Layers& l) {
  if (l.points && l.hotspots) return "points,hotspots";
  if (l.points) return "points";
  if (l.hotspots) return "hotspots";
  return "none";
}

Layers parse_layers(const std::string& v) {
  if (v == "points,hotspots" || v == "hotspots,points") return {true, true};
  if (v == "points") return {true, false};
  if (v == "hotspots") return {false, true};
  if (v == "none") return {false, false};
  throw InvalidArgument("layers", "expected points, hotspots, points,hotspots or none");
}

std::optional<double> optional_number(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

}  // namespace

api::Params filter_params(const QueryFilter& f) {
  api::Params p;
  if (f.year_from) p["year_from"] = std::to_string(*f.year_from);
  if (f.year_to) p["year_to"] = std::to_string(*f.year_to);
  if (f.tribe_id) p["tribe_id"] = *f.tribe_id;
  if (f.severity_group) p["severity_group"] = std::string(severity_group_name(*f.severity_group));
  if (f.urban_rural && *f.urban_rural != UrbanRural::unknown) {
    p["urban_rural"] = *f.urban_rural == UrbanRural::urban ? "urban" : "rural";
  }
  if (f.highway_class) p["highway_class"] = std::string(to_string(*f.highway_class));
  if (f.key_factor) p["key_factor"] = std::string(to_string(*f.key_factor));
  if (f.bbox) {
    p["bbox"] = num(f.bbox->min_lon) + "," + num(f.bbox->min_lat) + "," + num(f.bbox->max_lon) + "," +
                num(f.bbox->max_lat);
  }
  if (f.crash_type) p["crash_type"] = *f.crash_type;
  return p;
}

bool same_state(const DashboardState& a, const DashboardState& b) {
  return a.scope == b.scope && a.layers == b.layers && filter_params(a.filter) == filter_params(b.filter);
}

std::string to_url_query(const DashboardState& state) {
  auto p = filter_params(state.filter);
  p["scope"] = std::string(to_string(state.scope));
  if (!(state.layers.points && state.layers.hotspots)) p["layers"] = layers_value(state.layers);
  std::string out;
  for (const auto& [key, value] : p) {
    if (!out.empty()) out += '&';
    out += key + '=' + httplib::detail::encode_query_param(value);
  }
  return out;
}

DashboardState from_url_query(std::string_view query) {
  if (!query.empty() && query.front() == '?') query.remove_prefix(1);
  httplib::Params raw;
  httplib::detail::parse_query_text(std::string(query), raw);
  api::Params p;
  for (const auto& [key, value] : raw) {
    if (!p.emplace(key, value).second) throw InvalidArgument(key, "repeated parameter");
  }
  DashboardState s;
  api::Params filter_only;
  for (const auto& [key, value] : p) {
    if (key == "scope") {
      auto scope = parse_scope(value);
      if (!scope) throw InvalidArgument("scope", "unrecognised value '" + value + "'");
      s.scope = *scope;
    } else if (key == "layers") {
      s.layers = parse_layers(value);
    } else if (key == "year_from" || key == "year_to" || key == "tribe_id" || key == "severity_group" ||
               key == "urban_rural" || key == "highway_class" || key == "key_factor" || key == "bbox" ||
               key == "crash_type") {
      filter_only.emplace(key, value);
    } else {
      throw InvalidArgument(key, "unknown parameter");
    }
  }
  s.filter = api::parse_filter(filter_only);
  if (s.scope == Scope::single_tribe && !s.filter.tribe_id) {
    throw InvalidArgument("tribe_id", "single_tribe scope needs a tribe");
  }
  return s;
}

std::optional<FieldError> validate(const DashboardState& state) {
  try {
    state.filter.validate();
  } catch (const InvalidArgument& e) {
    return FieldError{e.param(), e.what()};
  }
  if (state.scope == Scope::single_tribe && !state.filter.tribe_id) {
    return FieldError{"tribe_id", "choose a tribe"};
  }
  return std::nullopt;
}

std::optional<std::string> tribe_at(std::span<const TribeBoundary> boundaries, GeoPoint p) {
  for (const auto& b : boundaries) {
    if (boundary_contains(b, p)) return b.tribe_id;
  }
  return std::nullopt;
}

DashboardState select_tribe(DashboardState state, const std::string& tribe_id) {
  state.filter.tribe_id = tribe_id;
  state.scope = Scope::single_tribe;
  return state;
}

DashboardState clear_tribe(DashboardState state) {
  state.filter.tribe_id.reset();
  if (state.scope == Scope::single_tribe) state.scope = Scope::tribal;
  return state;
}

std::vector<Request> refresh_plan(const DashboardState& state) {
  const auto filters = filter_params(state.filter);
  auto scoped = filters;
  scoped["scope"] = std::string(to_string(state.scope));
  std::vector<Request> plan;
  plan.push_back({"stats", "/api/v1/summary", scoped});
  plan.push_back({"rankings", "/api/v1/tribes/rankings", filters});
  auto types = filters;
  types["n"] = "10";
  plan.push_back({"crash_types", "/api/v1/crash-types", types});
  if (state.layers.points) {
    auto points = scoped;
    points["limit"] = "5000";
    plan.push_back({"points", "/api/v1/crashes", points});
  }
  if (state.layers.hotspots) plan.push_back({"hotspots", "/api/v1/hotspots", scoped});
  return plan;
}

std::string_view severity_color(Severity s) {
  switch (s) {
    case Severity::K:
      return "#7f0000";
    case Severity::A:
      return "#d7301f";
    case Severity::B:
      return "#fc8d59";
    case Severity::C:
      return "#fdd49e";
    case Severity::O:
      return "#bdbdbd";
  }
  return "#bdbdbd";
}

std::string_view hotspot_fill(std::string_view label) {
  if (label == "hot99") return "#b2182b";
  if (label == "hot95") return "#ef8a62";
  if (label == "hot90") return "#fddbc7";
  if (label == "cold90") return "#d1e5f0";
  if (label == "cold95") return "#67a9cf";
  if (label == "cold99") return "#2166ac";
  return "transparent";
}

StatCards stat_cards(const Json& body) {
  StatCards c;
  const auto& s = body.at("summary");
  const auto& inj = body.at("injury_counts");
  c.total_crashes = s.at("total").get<std::int64_t>();
  c.fatal_crashes = inj.at("K").get<std::int64_t>();
  c.injury_crashes =
      inj.at("A").get<std::int64_t>() + inj.at("B").get<std::int64_t>() + inj.at("C").get<std::int64_t>();
  c.kab_rate = optional_number(s.at("kab_rate"));
  c.ka_rate = optional_number(s.at("ka_rate"));
  c.no_data = c.total_crashes == 0;
  return c;
}

std::vector<RankingBar> ranking_histogram(const Json& body) {
  std::vector<RankingBar> bars;
  for (const auto& r : body.at("rows")) {
    bars.push_back({r.at("tribe_id").get<std::string>(), r.at("name").get<std::string>(),
                    r.at("summary").at("total").get<std::int64_t>(), optional_number(r.at("summary").at("kab_rate")),
                    r.at("kab_rank").get<int>()});
  }
  return bars;
}

std::vector<CrashTypePair> crash_type_chart(const Json& body) {
  std::vector<CrashTypePair> pairs;
  for (const auto& r : body.at("rows")) {
    pairs.push_back({r.at("label").get<std::string>(), r.at("tribal_percent").get<double>(),
                     r.at("statewide_percent").get<double>()});
  }
  return pairs;
}

MapView map_view(const Json* crashes_body, const Json* hotspots_body, const Layers& layers) {
  MapView v;
  if (layers.points && crashes_body) {
    for (const auto& f : crashes_body->at("features")) {
      const auto& xy = f.at("geometry").at("coordinates");
      const auto code = f.at("properties").at("severity").get<std::string>();
      auto sev = parse_severity(code);
      v.points.push_back({xy.at(0).get<double>(), xy.at(1).get<double>(), severity_color(sev.value_or(Severity::O)),
                          f.at("properties").at("crash_id").get<std::string>()});
    }
  }
  if (layers.hotspots && hotspots_body) {
    for (const auto& f : hotspots_body->at("features")) {
      const auto& p = f.at("properties");
      auto label = p.at("label").get<std::string>();
      v.cells.push_back({p.at("col").get<int>(), p.at("row").get<int>(), label, hotspot_fill(label)});
    }
  }
  return v;
}

MapView unavailable_map(std::string message) {
  MapView v;
  v.banner = std::move(message);
  return v;
}

Refresh::Refresh(std::uint64_t generation, std::vector<Request> plan)
    : generation_(generation), plan_(std::move(plan)) {}

bool Refresh::accept(std::uint64_t generation, const std::string& panel, Json body) {
  if (generation != generation_) return false;
  auto planned = std::find_if(plan_.begin(), plan_.end(), [&](const Request& r) { return r.panel == panel; });
  if (planned == plan_.end()) return false;
  for (auto& [name, held] : bodies_) {
    if (name == panel) {
      held = std::move(body);
      return true;
    }
  }
  bodies_.emplace_back(panel, std::move(body));
  return true;
}

bool Refresh::complete() const { return bodies_.size() == plan_.size() && consistent(); }

bool Refresh::consistent() const {
  for (const auto& [name, body] : bodies_) {
    if (body.value("snapshot_id", "") != bodies_.front().second.value("snapshot_id", "")) return false;
  }
  return true;
}

std::optional<std::string> Refresh::snapshot_id() const {
  if (bodies_.empty() || !consistent()) return std::nullopt;
  return bodies_.front().second.value("snapshot_id", "");
}

const Json* Refresh::body(const std::string& panel) const {
  for (const auto& [name, body] : bodies_) {
    if (name == panel) return &body;
  }
  return nullptr;
}

bool snapshot_changed(const DashboardState& state, const Json& body) {
  if (!state.snapshot_id || !body.contains("snapshot_id")) return false;
  return body.at("snapshot_id").get<std::string>() != *state.snapshot_id;
}

}  // namespace crashdash::dashboard
