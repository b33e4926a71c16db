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

#include "equivalence.hpp"

#include <map>
#include <random>

namespace equivalence {

using namespace crashdash;

namespace {

std::string where(const char* what, const std::string& detail) { return std::string(what) + ": " + detail; }

std::string show(const oracle::Counts& c) {
  return std::to_string(c.total) + "/" + std::to_string(c.kab) + "/" + std::to_string(c.ka);
}

std::string show(const RateSummary& s) {
  return std::to_string(s.total) + "/" + std::to_string(s.kab) + "/" + std::to_string(s.ka);
}

bool same(const RateSummary& s, const oracle::Counts& c) {
  if (s.total != c.total || s.kab != c.kab || s.ka != c.ka) return false;
  if (c.total == 0) return !s.kab_rate && !s.ka_rate;
  return s.kab_rate && s.ka_rate && *s.kab_rate == oracle::rate(c.kab, c.total) &&
         *s.ka_rate == oracle::rate(c.ka, c.total);
}

}  // namespace

QueryFilter random_filter(std::uint64_t seed, const DatasetSnapshot& snap) {
  std::mt19937_64 rng(seed);
  auto coin = [&](int in) { return static_cast<int>(rng() % 100) < in; };
  QueryFilter f;
  if (coin(30)) f.year_from = 2017 + static_cast<int>(rng() % 5);
  if (coin(30)) f.year_to = std::max(f.year_from.value_or(2017), 2017 + static_cast<int>(rng() % 5));
  if (coin(25) && !snap.boundaries().empty()) {
    f.tribe_id = snap.boundaries()[rng() % snap.boundaries().size()].tribe_id;
  }
  if (coin(20)) f.severity_group = static_cast<SeverityGroup>(rng() % 3);
  if (coin(20)) f.urban_rural = rng() % 2 ? UrbanRural::rural : UrbanRural::urban;
  if (coin(20)) f.highway_class = rng() % 2 ? HighwayClass::highway : HighwayClass::non_highway;
  if (coin(20)) f.key_factor = static_cast<KeyFactor>(rng() % kKeyFactorCount);
  if (coin(20) && !snap.records().empty()) {
    const auto& r = snap.records()[rng() % snap.records().size()];
    if (r.location) {
      const double w = 0.2 + static_cast<double>(rng() % 300) / 100.0;
      f.bbox = BBox{r.location->lon - w, r.location->lat - w / 2, r.location->lon + w, r.location->lat + w / 2};
    }
  }
  if (coin(15) && !snap.records().empty()) f.crash_type = snap.records()[rng() % snap.records().size()].crash_type;
  return f;
}

std::vector<std::string> compare(const DatasetSnapshot& snap, const oracle::Recount& recount,
                                 const QueryFilter& filter) {
  std::vector<std::string> bad;
  if (snap.records().size() != recount.records().size()) {
    bad.push_back("record count differs");
    return bad;
  }
  for (std::size_t i = 0; i < snap.records().size(); ++i) {
    if (snap.tribe_of(i) != recount.tribe(i)) bad.push_back(where("tribe", snap.records()[i].crash_id));
    if (static_cast<int>(snap.severities()[i]) != recount.severity(i)) {
      bad.push_back(where("severity", snap.records()[i].crash_id));
    }
  }

  std::vector<Scope> scopes = {Scope::statewide, Scope::tribal};
  if (filter.tribe_id) scopes.push_back(Scope::single_tribe);
  for (auto scope : scopes) {
    const auto expect = recount.count(recount.select(scope, filter));
    const auto idx = select_records(snap, scope, filter);
    const auto got = rate_summary(snap, idx);
    if (!same(got, expect)) {
      bad.push_back(where("summary", std::string(to_string(scope)) + " " + show(got) + " vs " + show(expect)));
    }

    for (auto dim : {Dimension::sex, Dimension::age_group, Dimension::key_factor, Dimension::road_category}) {
      const auto b = breakdown(snap, dim, scope, filter);
      auto groups = recount.group(dim, scope, filter);
      if (!same(b.scope_total, expect)) bad.push_back(where("breakdown total", std::string(to_string(dim))));
      for (const auto& row : b.rows) {
        const auto it = groups.find(row.label);
        const oracle::Counts c = it == groups.end() ? oracle::Counts{} : it->second;
        if (!same(row.summary, c)) {
          bad.push_back(where("breakdown", std::string(to_string(dim)) + "/" + row.label + " " + show(row.summary) +
                                               " vs " + show(c)));
        }
        if (it != groups.end()) groups.erase(it);
      }
      for (const auto& [label, c] : groups) {
        bad.push_back(where("breakdown missing row", std::string(to_string(dim)) + "/" + label));
      }
    }
  }

  const auto ranking = tribe_rankings(snap, filter);
  const auto expect_rank = recount.rankings(filter);
  if (ranking.rows.size() != expect_rank.size()) {
    bad.push_back(where("rankings", "row count " + std::to_string(ranking.rows.size()) + " vs " +
                                        std::to_string(expect_rank.size())));
  } else {
    for (std::size_t i = 0; i < expect_rank.size(); ++i) {
      const auto& g = ranking.rows[i];
      const auto& e = expect_rank[i];
      if (g.tribe_id != e.tribe_id || !same(g.summary, e.counts) || g.kab_rank != e.kab_rank ||
          g.ka_rank != e.ka_rank) {
        bad.push_back(where("rankings", "row " + std::to_string(i) + " " + g.tribe_id + " vs " + e.tribe_id));
      }
    }
  }

  for (auto weight : {CrashTypeWeight::total, CrashTypeWeight::kab}) {
    std::int64_t tbase = 0, sbase = 0;
    auto expect = recount.crash_types(weight == CrashTypeWeight::kab, filter, tbase, sbase);
    const auto got = top_crash_types(snap, 1000, weight, filter);
    if (got.tribal_base != tbase || got.statewide_base != sbase) bad.push_back(where("crash types", "bases"));
    if (got.rows.size() != expect.size()) bad.push_back(where("crash types", "row count"));
    std::int64_t prev_tribal = INT64_MAX;
    for (const auto& row : got.rows) {
      const auto it = expect.find(crash_type_key(row.label));
      if (it == expect.end() || it->second.tribal != row.tribal_count || it->second.statewide != row.statewide_count) {
        bad.push_back(where("crash types", row.label));
      }
      if (row.tribal_count > prev_tribal) bad.push_back(where("crash types", "order at " + row.label));
      prev_tribal = row.tribal_count;
    }
  }
  return bad;
}

}  // namespace equivalence
