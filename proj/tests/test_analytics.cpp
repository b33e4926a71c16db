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

#include <gtest/gtest.h>

#include <map>

#include "crashdash/analytics.hpp"
#include "crashdash/error.hpp"
#include "crashdash/synth.hpp"
#include "support/equivalence.hpp"
#include "support/fixtures.hpp"
#include "support/oracle.hpp"

using namespace crashdash;

namespace {

CrashRecord make_crash(const std::string& id, Severity injury, const std::string& type = "Angle") {
  CrashRecord c;
  c.crash_id = id;
  c.crash_date = {2019, 5, 1};
  c.location = GeoPoint{-87.5, 43.5};
  c.road_functional = RoadFunctional::STH;
  c.urban_rural = UrbanRural::rural;
  c.crash_type = type;
  PersonRecord p;
  p.role = PersonRole::driver;
  p.sex = Sex::male;
  p.age = 40;
  p.injury = injury;
  c.persons.push_back(p);
  c.severity = injury;
  return c;
}

std::shared_ptr<const DatasetSnapshot> snapshot_of(std::vector<CrashRecord> crashes) {
  return fixtures::build({std::move(crashes), synth::wisconsin_tribes()});
}

const BreakdownRow& row(const CategoryBreakdown& b, const std::string& label) {
  for (const auto& r : b.rows) {
    if (r.label == label) return r;
  }
  throw std::runtime_error("no row " + label);
}

}  // namespace

TEST(Rates, PublishedTotals) {
  auto tribal = RateSummary::from_counts(3396, 465, 108);
  EXPECT_EQ(format_percent(tribal.kab_rate, 1), "13.7");
  EXPECT_EQ(format_percent(tribal.ka_rate, 1), "3.2");
  auto lco = RateSummary::from_counts(202, 42, 18);
  EXPECT_EQ(format_percent(lco.kab_rate, 2), "20.79");
  EXPECT_EQ(format_percent(lco.ka_rate, 2), "8.91");
  EXPECT_NEAR(*lco.kab_rate, 20.7921, 0.0001);
  auto menominee = RateSummary::from_counts(74, 16, 2);
  EXPECT_EQ(format_percent(menominee.kab_rate, 2), "21.62");
  auto rural_highway = RateSummary::from_counts(543, 87, 27);
  EXPECT_EQ(format_percent(rural_highway.kab_rate, 1), "16.0");
  EXPECT_EQ(format_percent(rural_highway.ka_rate, 1), "5.0");
  auto impaired = RateSummary::from_counts(316, 133, 56);
  EXPECT_EQ(format_percent(impaired.kab_rate, 1), "42.1");
  EXPECT_EQ(format_percent(impaired.ka_rate, 1), "17.7");
}

TEST(Rates, EmptyIsUndefined) {
  auto s = RateSummary::from_counts(0, 0, 0);
  EXPECT_FALSE(s.kab_rate);
  EXPECT_FALSE(s.ka_rate);
  EXPECT_EQ(format_percent(s.kab_rate, 1), "");
  auto r = rate_summary(std::span<const CrashRecord>{});
  EXPECT_EQ(r.total, 0);
  EXPECT_FALSE(r.kab_rate);
}

TEST(Rates, RecordSpan) {
  std::vector<CrashRecord> v = {make_crash("1", Severity::K), make_crash("2", Severity::B),
                                make_crash("3", Severity::O), make_crash("4", Severity::C)};
  auto s = rate_summary(v);
  EXPECT_EQ(s, RateSummary::from_counts(4, 2, 1));
  EXPECT_EQ(*s.kab_rate, 50.0);
}

TEST(FormatPercent, RoundsHalfAwayFromZero) {
  EXPECT_EQ(format_percent(6.25, 1), "6.3");
  EXPECT_EQ(format_percent(100.0 * 21 / 336, 1), "6.3");
  EXPECT_EQ(format_percent(0.04, 1), "0.0");
  EXPECT_EQ(format_percent(-0.04, 1), "0.0");
  EXPECT_EQ(format_percent(100.0, 2), "100.00");
}

TEST(AgeGroups, Examples) {
  EXPECT_EQ(age_group_of(24), "15–24");
  EXPECT_EQ(age_group_of(0), "≤4");
  EXPECT_EQ(age_group_of(65), "65–74");
  EXPECT_EQ(age_group_of(75), "≥75");
  EXPECT_EQ(age_group_of(120), "≥75");
  EXPECT_EQ(age_group_of(std::nullopt), std::string(kUnknownLabel));
}

TEST(AgeGroups, StandardBinsPartitionAllAges) {
  const auto bins = AgeBins::standard();
  for (int age = 0; age <= 120; ++age) {
    EXPECT_EQ(bins.labels_for(age).size(), 1u) << age;
  }
  EXPECT_TRUE(bins.labels_for(121).empty());
  const auto printed = AgeBins::overlapping_as_printed();
  EXPECT_EQ(printed.labels_for(60).size(), 2u);
}

TEST(RoadCategories, Examples) {
  CrashRecord r;
  r.urban_rural = UrbanRural::rural;
  r.road_functional = RoadFunctional::STH;
  EXPECT_EQ(road_category(r), (RoadCategory{UrbanRural::rural, HighwayClass::highway}));
  r.urban_rural = UrbanRural::urban;
  r.road_functional = RoadFunctional::CTH;
  EXPECT_EQ(road_category(r), (RoadCategory{UrbanRural::urban, HighwayClass::non_highway}));
  r.road_functional = RoadFunctional::other;
  EXPECT_EQ(road_category(r), (RoadCategory{UrbanRural::urban, HighwayClass::unknown}));
  EXPECT_EQ(highway_class_of(RoadFunctional::IH), HighwayClass::highway);
  EXPECT_EQ(highway_class_of(RoadFunctional::local), HighwayClass::non_highway);
  EXPECT_EQ(road_category_label({UrbanRural::rural, HighwayClass::non_highway}), "Rural Non-highway");
}

TEST(Breakdown, SingleFemaleDriver) {
  auto c = make_crash("F1", Severity::B);
  c.persons[0].sex = Sex::female;
  auto snap = snapshot_of({c});
  auto b = breakdown(*snap, Dimension::sex, Scope::statewide, {});
  EXPECT_EQ(b.scope_total.total, 1);
  const auto& female = row(b, "Female");
  EXPECT_EQ(female.summary.total, 1);
  EXPECT_EQ(female.share, 100.0);
  EXPECT_EQ(female.summary.kab_rate, 100.0);
  const auto& male = row(b, "Male");
  EXPECT_EQ(male.summary.total, 0);
  EXPECT_EQ(male.share, 0.0);
  EXPECT_FALSE(male.summary.kab_rate);
}

TEST(Breakdown, EmptyScopeGivesZeroRows) {
  auto snap = snapshot_of({make_crash("A", Severity::K)});
  auto b = breakdown(*snap, Dimension::age_group, Scope::tribal, {});
  EXPECT_EQ(b.scope_total.total, 0);
  EXPECT_EQ(b.rows.size(), 8u);
  for (const auto& r : b.rows) {
    EXPECT_EQ(r.summary.total, 0);
    EXPECT_FALSE(r.share);
  }
}

TEST(Breakdown, AttributionModes) {
  auto c = make_crash("M", Severity::A);
  PersonRecord passenger;
  passenger.role = PersonRole::passenger;
  passenger.sex = Sex::female;
  passenger.age = 10;
  c.persons.push_back(passenger);
  auto snap = snapshot_of({c});
  auto primary = breakdown(*snap, Dimension::sex, Scope::statewide, {});
  EXPECT_EQ(row(primary, "Male").summary.total, 1);
  EXPECT_EQ(row(primary, "Female").summary.total, 0);
  BreakdownOptions any;
  any.attribution = PersonAttribution::any_person;
  auto both = breakdown(*snap, Dimension::sex, Scope::statewide, {}, any);
  EXPECT_EQ(row(both, "Male").summary.total, 1);
  EXPECT_EQ(row(both, "Female").summary.total, 1);
  auto ages = breakdown(*snap, Dimension::age_group, Scope::statewide, {}, any);
  EXPECT_EQ(row(ages, "5–14").summary.total, 1);
  EXPECT_EQ(row(ages, "25–44").summary.total, 1);
}

TEST(Breakdown, RowsPartitionTheScope) {
  auto snap = fixtures::build(synth::generate(fixtures::spec(3, 1000)));
  for (auto dim : {Dimension::sex, Dimension::age_group, Dimension::road_category}) {
    for (auto scope : {Scope::statewide, Scope::tribal}) {
      auto b = breakdown(*snap, dim, scope, {});
      std::int64_t sum = 0, kab = 0;
      for (const auto& r : b.rows) {
        sum += r.summary.total;
        kab += r.summary.kab;
      }
      EXPECT_EQ(sum, b.scope_total.total);
      EXPECT_EQ(kab, b.scope_total.kab);
    }
  }
}

TEST(RoadTableTest, RollUpsAddUp) {
  auto snap = fixtures::build(synth::generate(fixtures::spec(8, 2000)));
  auto t = road_table(*snap, Scope::statewide, {});
  ASSERT_EQ(t.rows.size(), 8u);
  std::map<std::string, RateSummary> by;
  for (const auto& r : t.rows) by[r.label] = r.summary;
  EXPECT_EQ(by["Total Crashes"].total, 2000);
  EXPECT_EQ(by["Highway"].total, by["Rural Highway"].total + by["Urban Highway"].total);
  EXPECT_EQ(by["Non-highway"].ka, by["Rural Non-highway"].ka + by["Urban Non-highway"].ka);
  EXPECT_EQ(by["Total Crashes"].total, by["Highway"].total + by["Non-highway"].total + by["Unclassified"].total);
}

TEST(Rankings, TiesGoToTheLargerTotal) {
  auto r = rank_tribes({{"A", "Alpha", RateSummary::from_counts(10, 2, 1)},
                        {"B", "Beta", RateSummary::from_counts(20, 4, 2)}});
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_EQ(r.rows[0].tribe_id, "B");
  EXPECT_EQ(r.rows[0].kab_rank, 1);
  EXPECT_EQ(r.rows[0].ka_rank, 1);
  EXPECT_EQ(r.rows[1].kab_rank, 2);
}

TEST(Rankings, SecondaryRateBreaksPrimaryTies) {
  auto r = rank_tribes({{"RC", "Red Cliff", RateSummary::from_counts(34, 5, 2)},
                        {"SM", "Stockbridge-Munsee", RateSummary::from_counts(68, 7, 4)}});
  // Equal KA rates; Red Cliff's higher KAB rate puts it ahead.
  EXPECT_EQ(r.rows[0].tribe_id, "RC");
  for (const auto& row : r.rows) {
    if (row.tribe_id == "RC") {
      EXPECT_EQ(row.ka_rank, 1);
    }
  }
}

TEST(Rankings, SingleTribeRanksFirst) {
  auto c = make_crash("L1", Severity::C);
  c.tribal_code = "LCO";
  auto snap = snapshot_of({c, make_crash("X", Severity::K)});
  auto r = tribe_rankings(*snap, {});
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(r.rows[0].tribe_id, "LCO");
  EXPECT_EQ(r.rows[0].kab_rank, 1);
  EXPECT_EQ(r.rows[0].ka_rank, 1);
  EXPECT_EQ(r.rows[0].name, "Lac Courte Oreilles Band");
}

TEST(Rankings, NoTribalCrashesGivesEmpty) {
  auto snap = snapshot_of({make_crash("X", Severity::K)});
  EXPECT_TRUE(tribe_rankings(*snap, {}).rows.empty());
}

TEST(CrashTypes, FewerTypesThanRequested) {
  auto snap = snapshot_of({make_crash("1", Severity::O, "Angle"), make_crash("2", Severity::O, "Tree")});
  auto t = top_crash_types(*snap, 3, CrashTypeWeight::total);
  EXPECT_EQ(t.rows.size(), 2u);
  EXPECT_THROW(top_crash_types(*snap, 0, CrashTypeWeight::total), InvalidArgument);
}

TEST(CrashTypes, DitchIsTwiceAsCommonOnTribalLand) {
  // 200 crashes: 20 tribal (2 Ditch), 180 elsewhere (8 Ditch) -> 10% vs 5%.
  std::vector<CrashRecord> v;
  for (int i = 0; i < 200; ++i) {
    const bool tribal = i < 20;
    const bool ditch = tribal ? i < 2 : i < 28;
    auto c = make_crash("C" + std::to_string(i), Severity::O, ditch ? "Ditch" : "Angle");
    if (tribal) c.tribal_code = "ONEIDA";
    v.push_back(c);
  }
  auto snap = snapshot_of(v);
  auto t = top_crash_types(*snap, 10, CrashTypeWeight::total);
  EXPECT_EQ(t.tribal_base, 20);
  EXPECT_EQ(t.statewide_base, 200);
  const CrashTypeRow* ditch = nullptr;
  for (const auto& r : t.rows) {
    if (r.label == "Ditch") ditch = &r;
  }
  ASSERT_NE(ditch, nullptr);
  EXPECT_DOUBLE_EQ(ditch->tribal_percent, 10.0);
  EXPECT_DOUBLE_EQ(ditch->statewide_percent, 5.0);
  EXPECT_EQ(format_percent(ditch->tribal_percent, 1), "10.0");
}

TEST(CrashTypes, LabelsMergeCaseInsensitively) {
  auto snap = snapshot_of({make_crash("1", Severity::A, "Tree"), make_crash("2", Severity::O, " tree "),
                           make_crash("3", Severity::O, "")});
  auto t = top_crash_types(*snap, 10, CrashTypeWeight::total);
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0].statewide_count, 2);
  EXPECT_EQ(t.rows[1].label, "Unknown");
  auto kab = top_crash_types(*snap, 10, CrashTypeWeight::kab);
  ASSERT_EQ(kab.rows.size(), 1u);
  EXPECT_EQ(kab.statewide_base, 1);
}

TEST(Selection, FilterErrors) {
  auto snap = snapshot_of({make_crash("1", Severity::O)});
  QueryFilter unknown;
  unknown.tribe_id = "NOPE";
  try {
    select_records(*snap, Scope::tribal, unknown);
    FAIL();
  } catch (const InvalidArgument& e) {
    EXPECT_EQ(e.param(), "tribe_id");
  }
  EXPECT_THROW(select_records(*snap, Scope::single_tribe, {}), InvalidArgument);
  QueryFilter years;
  years.year_from = 2020;
  years.year_to = 2019;
  EXPECT_THROW(select_records(*snap, Scope::statewide, years), InvalidArgument);
}

TEST(Parsers, QueryEnums) {
  EXPECT_EQ(parse_scope("single_tribe"), Scope::single_tribe);
  EXPECT_FALSE(parse_scope("state"));
  EXPECT_EQ(parse_highway_class("non_highway"), HighwayClass::non_highway);
  EXPECT_EQ(parse_dimension("road_category"), Dimension::road_category);
  EXPECT_EQ(parse_attribution("any_person"), PersonAttribution::any_person);
  EXPECT_EQ(parse_crash_type_weight("kab"), CrashTypeWeight::kab);
  EXPECT_FALSE(parse_crash_type_weight("ka"));
}

TEST(OracleEquivalence, RandomSnapshotsAndFilters) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    auto data = synth::generate(fixtures::spec(seed, 500 + 300 * static_cast<std::int64_t>(seed)));
    auto snap = fixtures::build(data);
    oracle::Recount recount(data.crashes, data.boundaries);
    ASSERT_GT(snap->info().tribal_count, 50u);
    for (std::uint64_t k = 0; k < 8; ++k) {
      const auto filter = k == 0 ? QueryFilter{} : equivalence::random_filter(seed * 100 + k, *snap);
      auto bad = equivalence::compare(*snap, recount, filter);
      for (const auto& b : bad) ADD_FAILURE() << "seed " << seed << " filter " << k << ": " << b;
      if (!bad.empty()) return;
    }
  }
}
