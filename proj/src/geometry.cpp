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

#include "crashdash/geometry.hpp"

#include <cmath>
#include <limits>
#include <set>

#include <json.hpp>

#include "crashdash/error.hpp"

namespace crashdash {

using nlohmann::json;

void BBox::expand(GeoPoint p) {
  min_lon = std::min(min_lon, p.lon);
  min_lat = std::min(min_lat, p.lat);
  max_lon = std::max(max_lon, p.lon);
  max_lat = std::max(max_lat, p.lat);
}

BBox BBox::empty() {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return {inf, inf, -inf, -inf};
}

BBox TribeBoundary::bbox() const {
  BBox box = BBox::empty();
  for (const auto& poly : polygons) {
    for (const auto& v : poly.outer) box.expand(v);
  }
  return box;
}

namespace {

bool on_segment(GeoPoint p, GeoPoint a, GeoPoint b) {
  double cross = (b.lon - a.lon) * (p.lat - a.lat) - (b.lat - a.lat) * (p.lon - a.lon);
  if (cross != 0.0) return false;
  return p.lon >= std::min(a.lon, b.lon) && p.lon <= std::max(a.lon, b.lon) &&
         p.lat >= std::min(a.lat, b.lat) && p.lat <= std::max(a.lat, b.lat);
}

bool on_ring_boundary(GeoPoint p, const Ring& ring) {
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
    if (on_segment(p, ring[i], ring[i + 1])) return true;
  }
  return false;
}

// Parity of crossings of a ray from p towards +lon.
bool crossing_parity(GeoPoint p, const Ring& ring) {
  bool inside = false;
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
    const GeoPoint& a = ring[i];
    const GeoPoint& b = ring[i + 1];
    if ((a.lat > p.lat) != (b.lat > p.lat)) {
      double x = a.lon + (p.lat - a.lat) * (b.lon - a.lon) / (b.lat - a.lat);
      if (p.lon < x) inside = !inside;
    }
  }
  return inside;
}

}  // namespace

bool point_in_ring(GeoPoint p, const Ring& ring) {
  if (ring.size() < 2) return false;
  if (on_ring_boundary(p, ring)) return true;
  return crossing_parity(p, ring);
}

bool point_in_polygon(GeoPoint p, const Polygon& polygon) {
  if (!point_in_ring(p, polygon.outer)) return false;
  for (const auto& hole : polygon.holes) {
    if (on_ring_boundary(p, hole)) return true;
    if (crossing_parity(p, hole)) return false;
  }
  return true;
}

bool boundary_contains(const TribeBoundary& boundary, GeoPoint p) {
  for (const auto& poly : boundary.polygons) {
    if (point_in_polygon(p, poly)) return true;
  }
  return false;
}

double ring_signed_area(const Ring& ring) {
  double twice = 0.0;
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
    twice += ring[i].lon * ring[i + 1].lat - ring[i + 1].lon * ring[i].lat;
  }
  return twice / 2.0;
}

namespace {

[[noreturn]] void fail(std::size_t feature, const std::string& what) {
  throw BoundaryError(what + ", feature " + std::to_string(feature));
}

Ring parse_ring(const json& coords, std::size_t feature) {
  if (!coords.is_array()) fail(feature, "ring is not an array");
  Ring ring;
  ring.reserve(coords.size());
  for (const auto& pos : coords) {
    if (!pos.is_array() || pos.size() < 2 || !pos[0].is_number() || !pos[1].is_number()) {
      fail(feature, "invalid position");
    }
    GeoPoint p{pos[0].get<double>(), pos[1].get<double>()};
    if (!std::isfinite(p.lon) || !std::isfinite(p.lat)) fail(feature, "non-finite coordinate");
    ring.push_back(p);
  }
  if (ring.size() < 4) fail(feature, "ring has fewer than 4 vertices");
  if (!(ring.front() == ring.back())) fail(feature, "ring not closed");
  return ring;
}

Polygon parse_polygon(const json& rings, std::size_t feature) {
  if (!rings.is_array() || rings.empty()) fail(feature, "polygon has no rings");
  Polygon poly;
  poly.outer = parse_ring(rings[0], feature);
  if (ring_signed_area(poly.outer) == 0.0) fail(feature, "polygon has zero area");
  for (std::size_t i = 1; i < rings.size(); ++i) {
    poly.holes.push_back(parse_ring(rings[i], feature));
    if (ring_signed_area(poly.holes.back()) == 0.0) fail(feature, "hole has zero area");
  }
  return poly;
}

}  // namespace

std::vector<TribeBoundary> load_boundaries(std::string_view geojson) {
  json doc;
  try {
    doc = json::parse(geojson);
  } catch (const json::parse_error& e) {
    throw BoundaryError(std::string("malformed GeoJSON: ") + e.what());
  }
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" ||
      !doc.contains("features") || !doc["features"].is_array()) {
    throw BoundaryError("malformed GeoJSON: expected a FeatureCollection");
  }

  std::vector<TribeBoundary> out;
  std::set<std::string> seen;
  const auto& features = doc["features"];
  for (std::size_t i = 0; i < features.size(); ++i) {
    const auto& feature = features[i];
    if (!feature.is_object() || feature.value("type", "") != "Feature") fail(i, "not a Feature");
    const auto props = feature.value("properties", json::object());
    if (!props.is_object() || !props.contains("tribe_id") || !props["tribe_id"].is_string() ||
        props["tribe_id"].get<std::string>().empty()) {
      fail(i, "missing tribe_id");
    }
    if (!props.contains("name") || !props["name"].is_string()) fail(i, "missing name");

    TribeBoundary boundary;
    boundary.tribe_id = props["tribe_id"].get<std::string>();
    boundary.name = props["name"].get<std::string>();
    if (!seen.insert(boundary.tribe_id).second) fail(i, "duplicate tribe_id '" + boundary.tribe_id + "'");

    if (!feature.contains("geometry") || !feature["geometry"].is_object()) fail(i, "missing geometry");
    const auto& geom = feature["geometry"];
    const std::string type = geom.value("type", "");
    if (!geom.contains("coordinates")) fail(i, "missing coordinates");
    const auto& coords = geom["coordinates"];
    if (type == "Polygon") {
      boundary.polygons.push_back(parse_polygon(coords, i));
    } else if (type == "MultiPolygon") {
      if (!coords.is_array() || coords.empty()) fail(i, "empty MultiPolygon");
      for (const auto& rings : coords) boundary.polygons.push_back(parse_polygon(rings, i));
    } else {
      fail(i, "unsupported geometry type '" + type + "'");
    }
    out.push_back(std::move(boundary));
  }
  return out;
}

std::string boundaries_to_geojson(std::span<const TribeBoundary> boundaries) {
  auto ring_json = [](const Ring& ring) {
    json arr = json::array();
    for (const auto& p : ring) arr.push_back({p.lon, p.lat});
    return arr;
  };
  nlohmann::ordered_json fc;
  fc["type"] = "FeatureCollection";
  fc["features"] = nlohmann::ordered_json::array();
  for (const auto& b : boundaries) {
    json polys = json::array();
    for (const auto& poly : b.polygons) {
      json rings = json::array();
      rings.push_back(ring_json(poly.outer));
      for (const auto& hole : poly.holes) rings.push_back(ring_json(hole));
      polys.push_back(std::move(rings));
    }
    nlohmann::ordered_json feature;
    feature["type"] = "Feature";
    feature["properties"] = {{"tribe_id", b.tribe_id}, {"name", b.name}};
    if (polys.size() == 1) {
      feature["geometry"] = {{"type", "Polygon"}, {"coordinates", polys[0]}};
    } else {
      feature["geometry"] = {{"type", "MultiPolygon"}, {"coordinates", polys}};
    }
    fc["features"].push_back(std::move(feature));
  }
  return fc.dump() + "\n";
}

}  // namespace crashdash
