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
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "crashdash/crash_record.hpp"
#include "crashdash/geometry.hpp"
#include "crashdash/snapshot.hpp"

namespace crashdash {

// ---------------------------------------------------------------------------
// Scoping and filtering

enum class Scope : std::uint8_t { statewide, tribal, single_tribe };
enum class HighwayClass : std::uint8_t { highway, non_highway, unknown };

std::optional<Scope> parse_scope(std::string_view text);
std::string_view to_string(Scope s);
std::optional<HighwayClass> parse_highway_class(std::string_view text);
std::string_view to_string(HighwayClass h);

struct QueryFilter {
  std::optional<int> year_from;
  std::optional<int> year_to;
  std::optional<std::string> tribe_id;
  std::optional<SeverityGroup> severity_group;
  std::optional<UrbanRural> urban_rural;
  std::optional<HighwayClass> highway_class;
  std::optional<KeyFactor> key_factor;
  std::optional<BBox> bbox;
  std::optional<std::string> crash_type;

  // Throws InvalidArgument (year range, bbox shape).
  void validate() const;
};

/// Indices of the records in `scope` that pass every filter, in snapshot
/// order. Statewide is every record; tribal is every tribe-assigned record;
/// single_tribe requires filter.tribe_id. A tribe_id unknown to the snapshot
/// throws InvalidArgument("tribe_id").
std::vector<std::size_t> select_records(const DatasetSnapshot& snapshot, Scope scope,
                                        const QueryFilter& filter);

// ---------------------------------------------------------------------------
// Rates

// total / KAB / KA crash counts with rates in percent. Rates are empty when
// total is zero, which is distinct from a 0% rate.
struct RateSummary {
  std::int64_t total = 0;
  std::int64_t kab = 0;
  std::int64_t ka = 0;
  std::optional<double> kab_rate;
  std::optional<double> ka_rate;

  static RateSummary from_counts(std::int64_t total, std::int64_t kab, std::int64_t ka);

  friend bool operator==(const RateSummary&, const RateSummary&) = default;
};

RateSummary rate_summary(std::span<const CrashRecord> records);
RateSummary rate_summary(const DatasetSnapshot& snapshot, std::span<const std::size_t> indices);

// Crash counts per rolled-up severity, K..O.
struct InjuryCounts {
  std::array<std::int64_t, 5> by_severity{};  // indexed by Severity value
  std::int64_t at(Severity s) const { return by_severity[static_cast<std::size_t>(s)]; }

  friend bool operator==(const InjuryCounts&, const InjuryCounts&) = default;
};

InjuryCounts injury_counts(const DatasetSnapshot& snapshot, std::span<const std::size_t> indices);

// ---------------------------------------------------------------------------
// Category functions

struct AgeBin {
  int lo = 0;
  int hi = 0;  // inclusive
  std::string label;
};

struct AgeBins {
  std::vector<AgeBin> bins;

  // Partition of 0..120: <=4, 5-14, 15-24, 25-44, 45-64, 65-74, >=75.
  static AgeBins standard();
  // The overlapping 45-64 / 55-74 reading; a crash can land in two bins.
  static AgeBins overlapping_as_printed();

  std::vector<std::string_view> labels_for(int age) const;
};

inline constexpr std::string_view kUnknownLabel = "Unknown";

// Label of the standard bin; "Unknown" when the age is not known.
std::string age_group_of(std::optional<int> age);

struct RoadCategory {
  UrbanRural area = UrbanRural::unknown;
  HighwayClass highway = HighwayClass::unknown;

  friend bool operator==(const RoadCategory&, const RoadCategory&) = default;
};

HighwayClass highway_class_of(RoadFunctional road);
RoadCategory road_category(const CrashRecord& record);
// "Rural Highway" ... "Urban Non-highway"; "Unknown" when either part is.
std::string road_category_label(RoadCategory c);

std::string_view key_factor_label(KeyFactor f);  // "Speeding", "Hit & Run", ...

// ---------------------------------------------------------------------------
// Breakdowns

enum class Dimension : std::uint8_t { sex, age_group, key_factor, road_category };
std::optional<Dimension> parse_dimension(std::string_view text);
std::string_view to_string(Dimension d);

// Which persons give a crash its sex / age label.
enum class PersonAttribution : std::uint8_t {
  primary_person,  // first driver, else first person; one label per crash
  any_person,      // every distinct label among the crash's persons
};
std::optional<PersonAttribution> parse_attribution(std::string_view text);
std::string_view to_string(PersonAttribution a);

struct BreakdownOptions {
  PersonAttribution attribution = PersonAttribution::primary_person;
  AgeBins age_bins = AgeBins::standard();
};

struct BreakdownRow {
  std::string label;
  std::optional<double> share;  // percent of the scope total
  RateSummary summary;

  friend bool operator==(const BreakdownRow&, const BreakdownRow&) = default;
};

struct CategoryBreakdown {
  Dimension dimension = Dimension::sex;
  Scope scope = Scope::statewide;
  std::optional<std::string> tribe_id;
  RateSummary scope_total;
  std::vector<BreakdownRow> rows;

  friend bool operator==(const CategoryBreakdown&, const CategoryBreakdown&) = default;
};

/// One row per dimension label, always emitted in a fixed order (zero rows
/// included). Sex and age rows partition the scope under primary-person
/// attribution; key-factor rows overlap.
CategoryBreakdown breakdown(const DatasetSnapshot& snapshot, Dimension dimension, Scope scope,
                            const QueryFilter& filter, const BreakdownOptions& options = {});

// Urban/rural x highway/non-highway table with the highway and non-highway
// roll-ups: Total Crashes, Highway, Non-highway, Rural Highway,
// Rural Non-highway, Urban Highway, Urban Non-highway, Unclassified.
struct RoadTableRow {
  std::string label;
  RateSummary summary;

  friend bool operator==(const RoadTableRow&, const RoadTableRow&) = default;
};

struct RoadTable {
  Scope scope = Scope::statewide;
  std::optional<std::string> tribe_id;
  std::vector<RoadTableRow> rows;

  friend bool operator==(const RoadTable&, const RoadTable&) = default;
};

RoadTable road_table(const DatasetSnapshot& snapshot, Scope scope, const QueryFilter& filter);

// ---------------------------------------------------------------------------
// Rankings

struct TribeRankingRow {
  std::string tribe_id;
  std::string name;
  RateSummary summary;
  int kab_rank = 0;
  int ka_rank = 0;

  friend bool operator==(const TribeRankingRow&, const TribeRankingRow&) = default;
};

struct TribeRanking {
  std::vector<TribeRankingRow> rows;  // ordered by kab_rank

  friend bool operator==(const TribeRanking&, const TribeRanking&) = default;
};

struct TribeTotals {
  std::string tribe_id;
  std::string name;
  RateSummary summary;
};

/// Ranks by descending rate. Ties fall back to the other severity group's
/// rate (descending), then larger total, then tribe name.
TribeRanking rank_tribes(std::vector<TribeTotals> tribes);

// One row per tribe with at least one crash after filters.
TribeRanking tribe_rankings(const DatasetSnapshot& snapshot, const QueryFilter& filter);

// ---------------------------------------------------------------------------
// Crash types

enum class CrashTypeWeight : std::uint8_t { total, kab };
std::optional<CrashTypeWeight> parse_crash_type_weight(std::string_view text);
std::string_view to_string(CrashTypeWeight w);

struct CrashTypeRow {
  std::string label;
  std::int64_t tribal_count = 0;
  double tribal_percent = 0.0;
  std::int64_t statewide_count = 0;
  double statewide_percent = 0.0;

  friend bool operator==(const CrashTypeRow&, const CrashTypeRow&) = default;
};

struct CrashTypeComparison {
  CrashTypeWeight weight = CrashTypeWeight::total;
  std::int64_t tribal_base = 0;     // denominator of tribal_percent
  std::int64_t statewide_base = 0;  // denominator of statewide_percent
  std::vector<CrashTypeRow> rows;   // tribal_percent descending

  friend bool operator==(const CrashTypeComparison&, const CrashTypeComparison&) = default;
};

// Crash-type labels compare case-insensitively after trimming; blank is
// "Unknown". The displayed label is the smallest spelling seen.
std::string crash_type_key(std::string_view label);

/// Top `n` crash types by share of tribal crashes (KAB crashes only when
/// weight is kab) next to the statewide share of the same type. The tribe_id
/// filter narrows only the tribal side. A zero base yields 0% shares.
CrashTypeComparison top_crash_types(const DatasetSnapshot& snapshot, int n, CrashTypeWeight weight,
                                    const QueryFilter& filter = {});

// Percent with `decimals` digits; empty string for an undefined rate.
std::string format_percent(std::optional<double> percent, int decimals);

}  // namespace crashdash
