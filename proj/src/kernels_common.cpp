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

#include <cmath>

#include "crashdash/kernels.hpp"

namespace crashdash::kernels {

GiStarMoments gi_star_moments(std::span<const std::int64_t> counts) {
  GiStarMoments m;
  m.n = static_cast<std::int64_t>(counts.size());
  __int128 sum_sq = 0;
  for (auto x : counts) {
    m.sum += x;
    sum_sq += static_cast<__int128>(x) * x;
  }
  m.spread = static_cast<__int128>(m.n) * sum_sq - m.sum * m.sum;
  return m;
}

// With x_bar = sum/n and S = sqrt(spread)/n, the textbook
//   (L - x_bar W) / (S sqrt((n W - W^2) / (n - 1)))
// becomes (n L - W sum) / (sqrt(spread) sqrt((n W - W^2) / (n - 1))), whose
// numerator is exact.
double gi_star_z_from_parts(const GiStarMoments& m, std::int64_t neighbour_sum,
                            std::int64_t weight) {
  if (m.n < 2 || m.spread <= 0) return 0.0;
  const std::int64_t disc = m.n * weight - weight * weight;
  if (disc <= 0) return 0.0;
  const __int128 numerator = static_cast<__int128>(m.n) * neighbour_sum -
                             static_cast<__int128>(weight) * m.sum;
  const double denom = std::sqrt(static_cast<double>(m.spread)) *
                       std::sqrt(static_cast<double>(disc) / static_cast<double>(m.n - 1));
  return static_cast<double>(numerator) / denom;
}

}  // namespace crashdash::kernels
