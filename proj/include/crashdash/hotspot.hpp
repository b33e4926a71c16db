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

#include <json.hpp>

#include "crashdash/analytics.hpp"
#include "crashdash/geometry.hpp"

namespace crashdash {

/// Regular lon/lat grid of crash counts, row-major from the south-west cell.
struct HotspotGrid {
  BBox bbox;
  double cell_size = 0.0;  // degrees
  int ncols = 0;
  int nrows = 0;
  std::vector<std::int64_t> counts;
  std::int64_t overflow = 0;  // points outside bbox

  std::size_t cell_count() const { return counts.size(); }
  std::int64_t at(int col, int row) const { return counts[static_cast<std::size_t>(row) * ncols + col]; }
  std::int64_t binned() const;
  BBox cell_bounds(int col, int row) const;
  GeoPoint cell_center(int col, int row) const;
};

// Upper bound on grid cells accepted by make_grid.
inline constexpr std::int64_t kMaxGridCells = 16'000'000;

// Empty grid covering `bbox`: ncols = ceil(width / cell_size), likewise rows.
// Throws InvalidArgument for cell_size <= 0, a degenerate bbox or an
// oversized grid.
HotspotGrid make_grid(const BBox& bbox, double cell_size);

HotspotGrid bin_to_grid(std::span<const GeoPoint> points, const BBox& bbox, double cell_size);

enum class HotspotLabel : std::uint8_t { hot99, hot95, hot90, neutral, cold90, cold95, cold99 };
std::string_view to_string(HotspotLabel l);

struct GiStarCell {
  int col = 0;
  int row = 0;
  std::int64_t count = 0;
  double z = 0.0;
  HotspotLabel label = HotspotLabel::neutral;
};

/// Getis-Ord Gi* with binary weights over the square (Chebyshev) neighbourhood
/// of `radius` cells, the cell itself included. Zero variance gives z = 0.
/// Labels are left neutral; see classify_hotspots. Throws InvalidArgument when
/// the grid has fewer than two cells or radius < 0.
std::vector<GiStarCell> gi_star(const HotspotGrid& grid, int radius);

// Same statistic through the serial reference kernel.
std::vector<GiStarCell> gi_star_serial(const HotspotGrid& grid, int radius);

// 90/95/99% confidence tiers: |z| > 1.645 / 1.960 / 2.576.
HotspotLabel classify_z(double z);
std::vector<GiStarCell> classify_hotspots(std::vector<GiStarCell> cells);

struct HotspotParams {
  double cell_size = 0.01;
  int radius = 1;
};

struct HotspotResult {
  HotspotGrid grid;
  std::vector<GiStarCell> cells;
  std::vector<std::string> warnings;
};

/// Bins the located crashes of a scope (after filters) and classifies every
/// cell. The grid covers the points, or the tribe's boundary when a tribe_id
/// is given. A degenerate extent is widened to one cell and a single-cell
/// grid yields one neutral cell plus a warning.
HotspotResult compute_hotspots(const DatasetSnapshot& snapshot, Scope scope, const QueryFilter& filter,
                               const HotspotParams& params);

enum class CellSelection : std::uint8_t { all, nonempty, significant };
std::optional<CellSelection> parse_cell_selection(std::string_view text);

// FeatureCollection of cell polygons with {col, row, count, z, label}.
nlohmann::ordered_json hotspots_feature_collection(const HotspotResult& result,
                                                   CellSelection which = CellSelection::all);
std::string hotspots_geojson(const HotspotResult& result, CellSelection which = CellSelection::all);
// col,row,lon_center,lat_center,count,z,label
std::string hotspots_csv(const HotspotResult& result, CellSelection which = CellSelection::all);

}  // namespace crashdash
