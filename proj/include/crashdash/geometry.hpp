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

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "crashdash/crash_record.hpp"

namespace crashdash {

// Axis-aligned box in degree space.
struct BBox {
  double min_lon = 0.0;
  double min_lat = 0.0;
  double max_lon = 0.0;
  double max_lat = 0.0;

  bool contains(GeoPoint p) const {
    return p.lon >= min_lon && p.lon <= max_lon && p.lat >= min_lat && p.lat <= max_lat;
  }
  bool degenerate() const { return !(max_lon > min_lon) || !(max_lat > min_lat); }
  void expand(GeoPoint p);

  static BBox empty();
  bool is_empty() const { return min_lon > max_lon || min_lat > max_lat; }

  friend bool operator==(const BBox&, const BBox&) = default;
};

// Closed ring: at least four vertices, first == last.
using Ring = std::vector<GeoPoint>;

struct Polygon {
  Ring outer;
  std::vector<Ring> holes;
};

struct TribeBoundary {
  std::string tribe_id;
  std::string name;
  std::vector<Polygon> polygons;

  BBox bbox() const;
};

/// Even-odd containment against one ring. Points on an edge or vertex count
/// as inside.
bool point_in_ring(GeoPoint p, const Ring& ring);

/// Inside the outer ring and not strictly inside any hole. Hole edges are
/// polygon boundary, so points on them are inside.
bool point_in_polygon(GeoPoint p, const Polygon& polygon);

bool boundary_contains(const TribeBoundary& boundary, GeoPoint p);

// Shoelace signed area (degrees squared).
double ring_signed_area(const Ring& ring);

/// Reads an RFC 7946 FeatureCollection of Polygon / MultiPolygon features with
/// string properties `tribe_id` (unique) and `name`. Throws BoundaryError
/// naming the feature index on any structural problem.
std::vector<TribeBoundary> load_boundaries(std::string_view geojson);

std::string boundaries_to_geojson(std::span<const TribeBoundary> boundaries);

}  // namespace crashdash
