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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "crashdash/analytics.hpp"
#include "crashdash/api.hpp"
#include "crashdash/geometry.hpp"
#include "crashdash/severity.hpp"

// Client-side contract of the analyst dashboard: filter state and its URL
// form, the requests a refresh issues, and the panel view models. View
// models only copy fields out of API bodies; nothing here recomputes a
// statistic.
namespace crashdash::dashboard {

struct Layers {
  bool points = true;
  bool hotspots = true;

  friend bool operator==(const Layers&, const Layers&) = default;
};

struct DashboardState {
  Scope scope = Scope::tribal;
  QueryFilter filter;  // the selected tribe is filter.tribe_id
  Layers layers;
  std::optional<std::string> snapshot_id;  // last one seen
};

bool same_state(const DashboardState& a, const DashboardState& b);

// Filter keys in API spelling; empty for an unset filter.
api::Params filter_params(const QueryFilter& f);

/// Query string without the leading '?'; keys sorted, values
/// percent-encoded. Layers are written only when one is off.
std::string to_url_query(const DashboardState& state);

/// Inverse of to_url_query. Throws InvalidArgument naming the field for an
/// unknown key or a value the API would reject.
DashboardState from_url_query(std::string_view query);

// Field-level problem found before any request is sent.
struct FieldError {
  std::string field;
  std::string message;
};

std::optional<FieldError> validate(const DashboardState& state);

// Tribe whose outline contains a clicked point, if any.
std::optional<std::string> tribe_at(std::span<const TribeBoundary> boundaries, GeoPoint p);

// Map click on a reservation outline.
DashboardState select_tribe(DashboardState state, const std::string& tribe_id);
DashboardState clear_tribe(DashboardState state);

struct Request {
  std::string panel;  // stats, rankings, crash_types, points, hotspots
  std::string path;
  api::Params params;
};

/// Every request of a full refresh. The tribe filter narrows the rankings
/// and crash-type panels through their own parameters; scope applies to the
/// others.
std::vector<Request> refresh_plan(const DashboardState& state);

// K..O fill colours, fixed.
std::string_view severity_color(Severity s);
std::string_view hotspot_fill(std::string_view label);

// ---------------------------------------------------------------------------
// View models

struct StatCards {
  std::int64_t total_crashes = 0;
  std::int64_t fatal_crashes = 0;   // K
  std::int64_t injury_crashes = 0;  // A + B + C, as counted by the API
  std::optional<double> kab_rate;   // empty shows the undefined marker
  std::optional<double> ka_rate;
  bool no_data = false;
};

StatCards stat_cards(const Json& summary_body);

struct RankingBar {
  std::string tribe_id;
  std::string name;
  std::int64_t total = 0;
  std::optional<double> kab_rate;
  int kab_rank = 0;
};

// Bars in the API's order (KAB rank).
std::vector<RankingBar> ranking_histogram(const Json& rankings_body);

struct CrashTypePair {
  std::string label;
  double tribal_percent = 0.0;
  double statewide_percent = 0.0;
};

std::vector<CrashTypePair> crash_type_chart(const Json& crash_types_body);

struct MapPoint {
  double lon = 0.0;
  double lat = 0.0;
  std::string_view color;
  std::string crash_id;
};

struct MapCell {
  int col = 0;
  int row = 0;
  std::string label;
  std::string_view fill;
};

struct MapView {
  std::vector<MapPoint> points;
  std::vector<MapCell> cells;
  std::optional<std::string> banner;  // set instead of data when the API is down
};

// Bodies may be null when the layer is off or the response is missing.
// Toggling a layer re-runs this on the bodies already held.
MapView map_view(const Json* crashes_body, const Json* hotspots_body, const Layers& layers);
MapView unavailable_map(std::string message);

/// Responses of one refresh. Responses from an older generation are
/// dropped; the view is complete once every planned panel has a body from
/// the same snapshot.
class Refresh {
 public:
  Refresh(std::uint64_t generation, std::vector<Request> plan);

  std::uint64_t generation() const { return generation_; }
  // False when the response belongs to another generation.
  bool accept(std::uint64_t generation, const std::string& panel, Json body);
  bool complete() const;
  // All accepted bodies carry one snapshot_id.
  bool consistent() const;
  std::optional<std::string> snapshot_id() const;
  const Json* body(const std::string& panel) const;

 private:
  std::uint64_t generation_;
  std::vector<Request> plan_;
  std::vector<std::pair<std::string, Json>> bodies_;
};

// True when a body from a new snapshot arrives after `state` saw another.
bool snapshot_changed(const DashboardState& state, const Json& body);

}  // namespace crashdash::dashboard
