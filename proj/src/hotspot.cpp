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

#include "crashdash/hotspot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include <json.hpp>

#include "crashdash/csv.hpp"
#include "crashdash/error.hpp"
#include "crashdash/kernels.hpp"

namespace crashdash {

std::int64_t HotspotGrid::binned() const {
  return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

BBox HotspotGrid::cell_bounds(int col, int row) const {
  return {bbox.min_lon + col * cell_size, bbox.min_lat + row * cell_size,
          bbox.min_lon + (col + 1) * cell_size, bbox.min_lat + (row + 1) * cell_size};
}

GeoPoint HotspotGrid::cell_center(int col, int row) const {
  return {bbox.min_lon + (col + 0.5) * cell_size, bbox.min_lat + (row + 0.5) * cell_size};
}

HotspotGrid make_grid(const BBox& bbox, double cell_size) {
  if (!(cell_size > 0.0) || !std::isfinite(cell_size)) {
    throw InvalidArgument("cell", "cell size must be positive");
  }
  if (bbox.degenerate()) throw InvalidArgument("bbox", "grid bbox must have positive extent");
  // Tolerate rounding noise so that an extent of exactly k cells gives k, not k + 1.
  const double cols = std::max(1.0, std::ceil((bbox.max_lon - bbox.min_lon) / cell_size - 1e-9));
  const double rows = std::max(1.0, std::ceil((bbox.max_lat - bbox.min_lat) / cell_size - 1e-9));
  if (cols * rows > static_cast<double>(kMaxGridCells)) {
    throw InvalidArgument("cell", "grid would exceed " + std::to_string(kMaxGridCells) + " cells");
  }
  HotspotGrid grid;
  grid.bbox = bbox;
  grid.cell_size = cell_size;
  grid.ncols = static_cast<int>(cols);
  grid.nrows = static_cast<int>(rows);
  grid.counts.assign(static_cast<std::size_t>(grid.ncols) * grid.nrows, 0);
  return grid;
}

HotspotGrid bin_to_grid(std::span<const GeoPoint> points, const BBox& bbox, double cell_size) {
  auto grid = make_grid(bbox, cell_size);
  grid.overflow = kernels::parallel::bin_points(
      points, {grid.bbox, grid.cell_size, grid.ncols, grid.nrows}, grid.counts);
  return grid;
}

std::string_view to_string(HotspotLabel l) {
  switch (l) {
    case HotspotLabel::hot99: return "hot99";
    case HotspotLabel::hot95: return "hot95";
    case HotspotLabel::hot90: return "hot90";
    case HotspotLabel::neutral: return "neutral";
    case HotspotLabel::cold90: return "cold90";
    case HotspotLabel::cold95: return "cold95";
    case HotspotLabel::cold99: return "cold99";
  }
  return "neutral";
}

namespace {

template <typename Kernel>
std::vector<GiStarCell> run_gi_star(const HotspotGrid& grid, int radius, Kernel kernel) {
  if (grid.cell_count() < 2) throw InvalidArgument("grid", "Gi* needs at least two cells");
  if (radius < 0) throw InvalidArgument("radius", "radius must be non-negative");
  std::vector<double> z(grid.cell_count());
  kernel(grid.counts, grid.ncols, grid.nrows, radius, z);
  std::vector<GiStarCell> cells;
  cells.reserve(z.size());
  for (int row = 0; row < grid.nrows; ++row) {
    for (int col = 0; col < grid.ncols; ++col) {
      const auto i = static_cast<std::size_t>(row) * grid.ncols + col;
      cells.push_back({col, row, grid.counts[i], z[i], HotspotLabel::neutral});
    }
  }
  return cells;
}

}  // namespace

std::vector<GiStarCell> gi_star(const HotspotGrid& grid, int radius) {
  return run_gi_star(grid, radius, kernels::parallel::gi_star);
}

std::vector<GiStarCell> gi_star_serial(const HotspotGrid& grid, int radius) {
  return run_gi_star(grid, radius, kernels::serial::gi_star);
}

HotspotLabel classify_z(double z) {
  if (z > 2.576) return HotspotLabel::hot99;
  if (z > 1.960) return HotspotLabel::hot95;
  if (z > 1.645) return HotspotLabel::hot90;
  if (z < -2.576) return HotspotLabel::cold99;
  if (z < -1.960) return HotspotLabel::cold95;
  if (z < -1.645) return HotspotLabel::cold90;
  return HotspotLabel::neutral;
}

std::vector<GiStarCell> classify_hotspots(std::vector<GiStarCell> cells) {
  for (auto& c : cells) c.label = classify_z(c.z);
  return cells;
}

HotspotResult compute_hotspots(const DatasetSnapshot& snapshot, Scope scope, const QueryFilter& filter,
                               const HotspotParams& params) {
  if (!(params.cell_size > 0.0)) throw InvalidArgument("cell", "cell size must be positive");
  if (params.radius < 0) throw InvalidArgument("radius", "radius must be non-negative");

  const auto selected = select_records(snapshot, scope, filter);
  std::vector<GeoPoint> points;
  points.reserve(selected.size());
  BBox extent = BBox::empty();
  for (auto i : selected) {
    if (const auto& loc = snapshot.records()[i].location) {
      points.push_back(*loc);
      extent.expand(*loc);
    }
  }

  HotspotResult result;
  if (points.empty()) result.warnings.push_back("no located crashes in scope");
  if (filter.tribe_id) {
    if (const auto* tribe = snapshot.resolver().find(*filter.tribe_id)) extent = tribe->bbox();
  } else if (filter.bbox) {
    extent = *filter.bbox;
  }
  if (extent.is_empty()) {
    result.warnings.push_back("empty grid");
    result.grid.cell_size = params.cell_size;
    return result;
  }
  if (!(extent.max_lon > extent.min_lon)) {
    extent.max_lon = extent.min_lon + params.cell_size;
    result.warnings.push_back("degenerate longitude extent widened to one cell");
  }
  if (!(extent.max_lat > extent.min_lat)) {
    extent.max_lat = extent.min_lat + params.cell_size;
    result.warnings.push_back("degenerate latitude extent widened to one cell");
  }

  result.grid = bin_to_grid(points, extent, params.cell_size);
  if (result.grid.cell_count() < 2) {
    result.warnings.push_back("single-cell grid; Gi* undefined, cell reported neutral");
    result.cells.push_back({0, 0, result.grid.counts.front(), 0.0, HotspotLabel::neutral});
    return result;
  }
  result.cells = classify_hotspots(gi_star(result.grid, params.radius));
  return result;
}

std::optional<CellSelection> parse_cell_selection(std::string_view t) {
  if (t == "all") return CellSelection::all;
  if (t == "nonempty") return CellSelection::nonempty;
  if (t == "significant") return CellSelection::significant;
  return std::nullopt;
}

namespace {

bool selected(const GiStarCell& c, CellSelection which) {
  switch (which) {
    case CellSelection::all: return true;
    case CellSelection::nonempty: return c.count > 0;
    case CellSelection::significant: return c.label != HotspotLabel::neutral;
  }
  return true;
}

}  // namespace

nlohmann::ordered_json hotspots_feature_collection(const HotspotResult& result, CellSelection which) {
  nlohmann::ordered_json fc;
  fc["type"] = "FeatureCollection";
  fc["features"] = nlohmann::ordered_json::array();
  for (const auto& c : result.cells) {
    if (!selected(c, which)) continue;
    const auto b = result.grid.cell_bounds(c.col, c.row);
    nlohmann::ordered_json feature;
    feature["type"] = "Feature";
    feature["geometry"] = {
        {"type", "Polygon"},
        {"coordinates",
         {{{b.min_lon, b.min_lat},
           {b.max_lon, b.min_lat},
           {b.max_lon, b.max_lat},
           {b.min_lon, b.max_lat},
           {b.min_lon, b.min_lat}}}}};
    feature["properties"] = {{"col", c.col},     {"row", c.row},
                             {"count", c.count}, {"z", c.z},
                             {"label", std::string(to_string(c.label))}};
    fc["features"].push_back(std::move(feature));
  }
  return fc;
}

std::string hotspots_geojson(const HotspotResult& result, CellSelection which) {
  return hotspots_feature_collection(result, which).dump();
}

std::string hotspots_csv(const HotspotResult& result, CellSelection which) {
  std::string out;
  append_csv_row(out, {"col", "row", "lon_center", "lat_center", "count", "z", "label"});
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (const auto& c : result.cells) {
    if (!selected(c, which)) continue;
    const auto center = result.grid.cell_center(c.col, c.row);
    append_csv_row(out, std::vector<std::string>{std::to_string(c.col), std::to_string(c.row),
                                                 num(center.lon), num(center.lat),
                                                 std::to_string(c.count), num(c.z),
                                                 std::string(to_string(c.label))});
  }
  return out;
}

}  // namespace crashdash
