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

#include <algorithm>

#include "crashdash/kernels.hpp"

namespace crashdash::kernels::serial {

SeverityTally tally_severity(std::span<const Severity> severities,
                             std::span<const std::size_t> indices) {
  SeverityTally tally{};
  for (auto i : indices) ++tally[static_cast<std::size_t>(severities[i])];
  return tally;
}

std::int64_t bin_points(std::span<const GeoPoint> points, const GridGeometry& grid,
                        std::span<std::int64_t> counts) {
  std::int64_t overflow = 0;
  for (const auto& p : points) {
    if (!grid.bbox.contains(p)) {
      ++overflow;
      continue;
    }
    int col = axis_cell(p.lon, grid.bbox.min_lon, grid.cell_size, grid.ncols);
    int row = axis_cell(p.lat, grid.bbox.min_lat, grid.cell_size, grid.nrows);
    ++counts[static_cast<std::size_t>(row) * grid.ncols + col];
  }
  return overflow;
}

void gi_star(std::span<const std::int64_t> counts, int ncols, int nrows, int radius,
             std::span<double> z) {
  const auto moments = gi_star_moments(counts);
  for (int row = 0; row < nrows; ++row) {
    for (int col = 0; col < ncols; ++col) {
      std::int64_t sum = 0, weight = 0;
      for (int r = std::max(0, row - radius); r <= std::min(nrows - 1, row + radius); ++r) {
        for (int c = std::max(0, col - radius); c <= std::min(ncols - 1, col + radius); ++c) {
          sum += counts[static_cast<std::size_t>(r) * ncols + c];
          ++weight;
        }
      }
      z[static_cast<std::size_t>(row) * ncols + col] = gi_star_z_from_parts(moments, sum, weight);
    }
  }
}

}  // namespace crashdash::kernels::serial
