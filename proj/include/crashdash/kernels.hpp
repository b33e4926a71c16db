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

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

#include "crashdash/crash_record.hpp"
#include "crashdash/geometry.hpp"
#include "crashdash/severity.hpp"

// Inner loops of the analytics and hotspot engines. `serial` is the plain
// reference; `parallel` is the OpenMP version and must produce identical
// results (all accumulation is integer, so it does bit-for-bit).
namespace crashdash::kernels {

using SeverityTally = std::array<std::int64_t, 5>;  // indexed by Severity value

struct GridGeometry {
  BBox bbox;
  double cell_size = 0.0;
  int ncols = 0;
  int nrows = 0;
};

// Cell index along one axis for a coordinate known to be inside the bbox.
// Half-open cells, with the last cell closed on its far edge.
inline int axis_cell(double v, double min, double cell_size, int n) {
  auto i = static_cast<long long>((v - min) / cell_size);
  if (i < 0) i = 0;
  if (i >= n) i = n - 1;
  return static_cast<int>(i);
}

// Dataset-wide moments needed by every Gi* cell.
struct GiStarMoments {
  std::int64_t n = 0;
  __int128 sum = 0;
  // n * sum(x^2) - sum(x)^2, i.e. n^2 times the population variance.
  __int128 spread = 0;
};

GiStarMoments gi_star_moments(std::span<const std::int64_t> counts);

// z from exact integer pieces: neighbour_sum = sum_j w_ij x_j, weight = W_i.
double gi_star_z_from_parts(const GiStarMoments& m, std::int64_t neighbour_sum, std::int64_t weight);

namespace serial {

SeverityTally tally_severity(std::span<const Severity> severities,
                             std::span<const std::size_t> indices);

// Returns the overflow tally (points outside the bbox).
std::int64_t bin_points(std::span<const GeoPoint> points, const GridGeometry& grid,
                        std::span<std::int64_t> counts);

// Direct neighbourhood summation per cell.
void gi_star(std::span<const std::int64_t> counts, int ncols, int nrows, int radius,
             std::span<double> z);

}  // namespace serial

namespace parallel {

SeverityTally tally_severity(std::span<const Severity> severities,
                             std::span<const std::size_t> indices);

std::int64_t bin_points(std::span<const GeoPoint> points, const GridGeometry& grid,
                        std::span<std::int64_t> counts);

// Summed-area table, one independent task per cell.
void gi_star(std::span<const std::int64_t> counts, int ncols, int nrows, int radius,
             std::span<double> z);

}  // namespace parallel

}  // namespace crashdash::kernels
