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

#include <omp.h>

#include <algorithm>
#include <vector>

#include "crashdash/kernels.hpp"

namespace crashdash::kernels::parallel {

SeverityTally tally_severity(std::span<const Severity> severities,
                             std::span<const std::size_t> indices) {
  SeverityTally tally{};
  const auto n = static_cast<std::ptrdiff_t>(indices.size());
#pragma omp parallel
  {
    SeverityTally local{};
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = 0; i < n; ++i) ++local[static_cast<std::size_t>(severities[indices[i]])];
#pragma omp critical(crashdash_tally)
    for (std::size_t s = 0; s < local.size(); ++s) tally[s] += local[s];
  }
  return tally;
}

std::int64_t bin_points(std::span<const GeoPoint> points, const GridGeometry& grid,
                        std::span<std::int64_t> counts) {
  const auto n = static_cast<std::ptrdiff_t>(points.size());
  std::vector<std::int64_t> cell_of(points.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto& p = points[i];
    if (!grid.bbox.contains(p)) {
      cell_of[i] = -1;
      continue;
    }
    int col = axis_cell(p.lon, grid.bbox.min_lon, grid.cell_size, grid.ncols);
    int row = axis_cell(p.lat, grid.bbox.min_lat, grid.cell_size, grid.nrows);
    cell_of[i] = static_cast<std::int64_t>(row) * grid.ncols + col;
  }
  std::int64_t overflow = 0;
  for (auto cell : cell_of) {
    if (cell < 0) {
      ++overflow;
    } else {
      ++counts[static_cast<std::size_t>(cell)];
    }
  }
  return overflow;
}

void gi_star(std::span<const std::int64_t> counts, int ncols, int nrows, int radius,
             std::span<double> z) {
  const auto moments = gi_star_moments(counts);
  // table[(r)(ncols+1) + c] = sum of counts[0..r) x [0..c)
  const std::size_t stride = static_cast<std::size_t>(ncols) + 1;
  std::vector<std::int64_t> table(stride * (static_cast<std::size_t>(nrows) + 1), 0);
  for (int r = 0; r < nrows; ++r) {
    std::int64_t row_sum = 0;
    for (int c = 0; c < ncols; ++c) {
      row_sum += counts[static_cast<std::size_t>(r) * ncols + c];
      table[(r + 1) * stride + c + 1] = table[r * stride + c + 1] + row_sum;
    }
  }

  const std::ptrdiff_t cells = static_cast<std::ptrdiff_t>(ncols) * nrows;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < cells; ++i) {
    const int row = static_cast<int>(i / ncols);
    const int col = static_cast<int>(i % ncols);
    const int r0 = std::max(0, row - radius), r1 = std::min(nrows - 1, row + radius) + 1;
    const int c0 = std::max(0, col - radius), c1 = std::min(ncols - 1, col + radius) + 1;
    const std::int64_t sum = table[r1 * stride + c1] - table[r0 * stride + c1] -
                             table[r1 * stride + c0] + table[r0 * stride + c0];
    const std::int64_t weight = static_cast<std::int64_t>(r1 - r0) * (c1 - c0);
    z[static_cast<std::size_t>(i)] = gi_star_z_from_parts(moments, sum, weight);
  }
}

}  // namespace crashdash::kernels::parallel
