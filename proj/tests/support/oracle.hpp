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

// Reference implementations used only by tests. They work from the
// generator's in-memory records (not the ingested CSV) and share no code
// with the library beyond plain data types.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "crashdash/analytics.hpp"
#include "crashdash/crash_record.hpp"
#include "crashdash/geometry.hpp"

namespace oracle {

using crashdash::CrashRecord;
using crashdash::GeoPoint;
using crashdash::TribeBoundary;

struct Counts {
  std::int64_t total = 0;
  std::int64_t kab = 0;
  std::int64_t ka = 0;

  friend bool operator==(const Counts&, const Counts&) = default;
};

// Vertical ray cast upwards from p; points on an edge count as inside.
bool in_ring(GeoPoint p, const std::vector<GeoPoint>& ring);
bool in_polygon(GeoPoint p, const crashdash::Polygon& polygon);

// Textbook Gi* written straight from the definition with doubles.
std::vector<double> gi_star(const std::vector<double>& x, int ncols, int nrows, int radius);

// Cell index by scanning cell edges; -1 when outside the box.
int bin_col(double v, double min, double max, double cell, int n);

class Recount {
 public:
  Recount(std::vector<CrashRecord> records, std::vector<TribeBoundary> boundaries);

  const std::vector<CrashRecord>& records() const { return records_; }
  const std::optional<std::string>& tribe(std::size_t i) const { return tribe_[i]; }
  int severity(std::size_t i) const { return severity_[i]; }  // 0=O .. 4=K

  std::vector<std::size_t> select(crashdash::Scope scope, const crashdash::QueryFilter& f) const;
  Counts count(const std::vector<std::size_t>& idx) const;
  std::map<std::string, Counts> group(crashdash::Dimension d, crashdash::Scope scope,
                                      const crashdash::QueryFilter& f) const;

  struct RankRow {
    std::string tribe_id;
    Counts counts;
    int kab_rank = 0;
    int ka_rank = 0;
  };
  std::vector<RankRow> rankings(const crashdash::QueryFilter& f) const;

  struct TypeCount {
    std::int64_t tribal = 0;
    std::int64_t statewide = 0;
  };
  // Keyed by lower-cased trimmed type ("unknown" for blank).
  std::map<std::string, TypeCount> crash_types(bool kab_only, const crashdash::QueryFilter& f,
                                               std::int64_t& tribal_base, std::int64_t& statewide_base) const;

  std::string tribe_name(const std::string& id) const;

 private:
  std::vector<CrashRecord> records_;
  std::vector<TribeBoundary> boundaries_;
  std::vector<std::optional<std::string>> tribe_;
  std::vector<int> severity_;
};

double rate(std::int64_t part, std::int64_t total);

}  // namespace oracle
