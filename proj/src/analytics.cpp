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

#include "crashdash/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <unordered_map>

#include "crashdash/error.hpp"
#include "crashdash/kernels.hpp"
#include "crashdash/text.hpp"

namespace crashdash {

// ---------------------------------------------------------------------------
// enums

std::optional<Scope> parse_scope(std::string_view t) {
  t = text::trim(t);
  if (t == "statewide") return Scope::statewide;
  if (t == "tribal") return Scope::tribal;
  if (t == "single_tribe") return Scope::single_tribe;
  return std::nullopt;
}

std::string_view to_string(Scope s) {
  switch (s) {
    case Scope::statewide: return "statewide";
    case Scope::tribal: return "tribal";
    case Scope::single_tribe: return "single_tribe";
  }
  return "statewide";
}

std::optional<HighwayClass> parse_highway_class(std::string_view t) {
  t = text::trim(t);
  if (t == "highway") return HighwayClass::highway;
  if (t == "non_highway") return HighwayClass::non_highway;
  return std::nullopt;
}

std::string_view to_string(HighwayClass h) {
  switch (h) {
    case HighwayClass::highway: return "highway";
    case HighwayClass::non_highway: return "non_highway";
    case HighwayClass::unknown: return "unknown";
  }
  return "unknown";
}

std::optional<Dimension> parse_dimension(std::string_view t) {
  t = text::trim(t);
  if (t == "sex") return Dimension::sex;
  if (t == "age_group") return Dimension::age_group;
  if (t == "key_factor") return Dimension::key_factor;
  if (t == "road_category") return Dimension::road_category;
  return std::nullopt;
}

std::string_view to_string(Dimension d) {
  switch (d) {
    case Dimension::sex: return "sex";
    case Dimension::age_group: return "age_group";
    case Dimension::key_factor: return "key_factor";
    case Dimension::road_category: return "road_category";
  }
  return "sex";
}

std::optional<PersonAttribution> parse_attribution(std::string_view t) {
  t = text::trim(t);
  if (t == "primary_person") return PersonAttribution::primary_person;
  if (t == "any_person") return PersonAttribution::any_person;
  return std::nullopt;
}

std::string_view to_string(PersonAttribution a) {
  return a == PersonAttribution::any_person ? "any_person" : "primary_person";
}

std::optional<CrashTypeWeight> parse_crash_type_weight(std::string_view t) {
  t = text::trim(t);
  if (t == "total") return CrashTypeWeight::total;
  if (t == "kab") return CrashTypeWeight::kab;
  return std::nullopt;
}

std::string_view to_string(CrashTypeWeight w) { return w == CrashTypeWeight::kab ? "kab" : "total"; }

// ---------------------------------------------------------------------------
// filtering

void QueryFilter::validate() const {
  if (year_from && year_to && *year_from > *year_to) {
    throw InvalidArgument("year_from", "year_from must not exceed year_to");
  }
  if (bbox && (bbox->min_lon > bbox->max_lon || bbox->min_lat > bbox->max_lat)) {
    throw InvalidArgument("bbox", "bbox must be min_lon,min_lat,max_lon,max_lat");
  }
}

namespace {

bool passes(const CrashRecord& r, const QueryFilter& f, const std::string* crash_type_key_filter) {
  if (f.year_from && r.crash_date.year < *f.year_from) return false;
  if (f.year_to && r.crash_date.year > *f.year_to) return false;
  if (f.severity_group && !in_group(r.severity, *f.severity_group)) return false;
  if (f.urban_rural && r.urban_rural != *f.urban_rural) return false;
  if (f.highway_class && highway_class_of(r.road_functional) != *f.highway_class) return false;
  if (f.key_factor && !r.flags.test(*f.key_factor)) return false;
  if (f.bbox && (!r.location || !f.bbox->contains(*r.location))) return false;
  if (crash_type_key_filter && crash_type_key(r.crash_type) != *crash_type_key_filter) return false;
  return true;
}

}  // namespace

std::vector<std::size_t> select_records(const DatasetSnapshot& snapshot, Scope scope,
                                        const QueryFilter& filter) {
  filter.validate();
  const TribeBoundary* tribe = nullptr;
  if (filter.tribe_id) {
    tribe = snapshot.resolver().find(*filter.tribe_id);
    if (!tribe) throw InvalidArgument("tribe_id", "unknown tribe_id '" + *filter.tribe_id + "'");
  } else if (scope == Scope::single_tribe) {
    throw InvalidArgument("tribe_id", "scope single_tribe requires tribe_id");
  }
  std::optional<std::string> type_key;
  if (filter.crash_type) type_key = crash_type_key(*filter.crash_type);

  const auto& records = snapshot.records();
  std::vector<std::size_t> out;
  out.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& tribe_id = snapshot.tribe_of(i);
    if (scope != Scope::statewide && !tribe_id) continue;
    if (tribe && (!tribe_id || *tribe_id != tribe->tribe_id)) continue;
    if (!passes(records[i], filter, type_key ? &*type_key : nullptr)) continue;
    out.push_back(i);
  }
  return out;
}

// ---------------------------------------------------------------------------
// rates

RateSummary RateSummary::from_counts(std::int64_t total, std::int64_t kab, std::int64_t ka) {
  RateSummary s{total, kab, ka, std::nullopt, std::nullopt};
  if (total > 0) {
    s.kab_rate = 100.0 * static_cast<double>(kab) / static_cast<double>(total);
    s.ka_rate = 100.0 * static_cast<double>(ka) / static_cast<double>(total);
  }
  return s;
}

namespace {

RateSummary from_tally(const kernels::SeverityTally& t) {
  auto at = [&](Severity s) { return t[static_cast<std::size_t>(s)]; };
  const std::int64_t ka = at(Severity::K) + at(Severity::A);
  const std::int64_t kab = ka + at(Severity::B);
  return RateSummary::from_counts(ka + at(Severity::B) + at(Severity::C) + at(Severity::O), kab, ka);
}

struct Counter {
  std::int64_t total = 0, kab = 0, ka = 0;

  void add(Severity s) {
    ++total;
    if (in_group(s, SeverityGroup::KAB)) ++kab;
    if (in_group(s, SeverityGroup::KA)) ++ka;
  }
  RateSummary summary() const { return RateSummary::from_counts(total, kab, ka); }
};

}  // namespace

RateSummary rate_summary(std::span<const CrashRecord> records) {
  Counter c;
  for (const auto& r : records) c.add(r.severity);
  return c.summary();
}

RateSummary rate_summary(const DatasetSnapshot& snapshot, std::span<const std::size_t> indices) {
  return from_tally(kernels::parallel::tally_severity(snapshot.severities(), indices));
}

InjuryCounts injury_counts(const DatasetSnapshot& snapshot, std::span<const std::size_t> indices) {
  return InjuryCounts{kernels::parallel::tally_severity(snapshot.severities(), indices)};
}

// ---------------------------------------------------------------------------
// categories

AgeBins AgeBins::standard() {
  return AgeBins{{{0, 4, "≤4"},
                  {5, 14, "5–14"},
                  {15, 24, "15–24"},
                  {25, 44, "25–44"},
                  {45, 64, "45–64"},
                  {65, 74, "65–74"},
                  {75, 120, "≥75"}}};
}

AgeBins AgeBins::overlapping_as_printed() {
  return AgeBins{{{0, 4, "≤4"},
                  {5, 14, "5–14"},
                  {15, 24, "15–24"},
                  {25, 44, "25–44"},
                  {45, 64, "45–64"},
                  {55, 74, "55–74"},
                  {75, 120, "≥75"}}};
}

std::vector<std::string_view> AgeBins::labels_for(int age) const {
  std::vector<std::string_view> out;
  for (const auto& bin : bins) {
    if (age >= bin.lo && age <= bin.hi) out.emplace_back(bin.label);
  }
  return out;
}

std::string age_group_of(std::optional<int> age) {
  if (!age) return std::string(kUnknownLabel);
  static const AgeBins bins = AgeBins::standard();
  auto labels = bins.labels_for(*age);
  return labels.empty() ? std::string(kUnknownLabel) : std::string(labels.front());
}

HighwayClass highway_class_of(RoadFunctional road) {
  switch (road) {
    case RoadFunctional::STH:
    case RoadFunctional::USH:
    case RoadFunctional::IH: return HighwayClass::highway;
    case RoadFunctional::CTH:
    case RoadFunctional::local: return HighwayClass::non_highway;
    case RoadFunctional::other:
    case RoadFunctional::unknown: break;
  }
  return HighwayClass::unknown;
}

RoadCategory road_category(const CrashRecord& record) {
  return {record.urban_rural, highway_class_of(record.road_functional)};
}

std::string road_category_label(RoadCategory c) {
  if (c.area == UrbanRural::unknown || c.highway == HighwayClass::unknown) {
    return std::string(kUnknownLabel);
  }
  std::string label = c.area == UrbanRural::rural ? "Rural " : "Urban ";
  label += c.highway == HighwayClass::highway ? "Highway" : "Non-highway";
  return label;
}

std::string_view key_factor_label(KeyFactor f) {
  switch (f) {
    case KeyFactor::speeding: return "Speeding";
    case KeyFactor::impaired: return "Impaired";
    case KeyFactor::pedestrian: return "Pedestrian";
    case KeyFactor::hit_and_run: return "Hit & Run";
    case KeyFactor::safety_belt: return "Safety Belt";
  }
  return "";
}

// ---------------------------------------------------------------------------
// breakdown

namespace {

constexpr KeyFactor kKeyFactors[] = {KeyFactor::speeding, KeyFactor::impaired,
                                     KeyFactor::pedestrian, KeyFactor::hit_and_run,
                                     KeyFactor::safety_belt};

std::string_view sex_label(Sex s) {
  switch (s) {
    case Sex::female: return "Female";
    case Sex::male: return "Male";
    case Sex::unknown: break;
  }
  return kUnknownLabel;
}

const PersonRecord* primary_person(const CrashRecord& r) {
  for (const auto& p : r.persons) {
    if (p.role == PersonRole::driver) return &p;
  }
  return r.persons.empty() ? nullptr : &r.persons.front();
}

std::vector<std::string> row_labels(Dimension d, const BreakdownOptions& options) {
  std::vector<std::string> labels;
  switch (d) {
    case Dimension::sex:
      labels = {"Female", "Male"};
      break;
    case Dimension::age_group:
      for (const auto& bin : options.age_bins.bins) labels.push_back(bin.label);
      break;
    case Dimension::key_factor:
      for (auto f : kKeyFactors) labels.emplace_back(key_factor_label(f));
      return labels;
    case Dimension::road_category:
      labels = {"Rural Highway", "Rural Non-highway", "Urban Highway", "Urban Non-highway"};
      break;
  }
  labels.emplace_back(kUnknownLabel);
  return labels;
}

// Appends the (distinct) labels a record falls under.
void labels_of(const CrashRecord& r, Dimension d, const BreakdownOptions& options,
               std::vector<std::string_view>& out) {
  out.clear();
  auto add_unique = [&](std::string_view l) {
    if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(l);
  };
  auto add_age = [&](const std::optional<int>& age) {
    if (!age) {
      add_unique(kUnknownLabel);
      return;
    }
    auto labels = options.age_bins.labels_for(*age);
    if (labels.empty()) add_unique(kUnknownLabel);
    for (auto l : labels) add_unique(l);
  };

  switch (d) {
    case Dimension::sex:
      if (options.attribution == PersonAttribution::primary_person || r.persons.empty()) {
        const auto* p = primary_person(r);
        add_unique(p ? sex_label(p->sex) : kUnknownLabel);
      } else {
        for (const auto& p : r.persons) add_unique(sex_label(p.sex));
      }
      break;
    case Dimension::age_group:
      if (options.attribution == PersonAttribution::primary_person || r.persons.empty()) {
        const auto* p = primary_person(r);
        add_age(p ? p->age : std::nullopt);
      } else {
        for (const auto& p : r.persons) add_age(p.age);
      }
      break;
    case Dimension::key_factor:
      for (auto f : kKeyFactors) {
        if (r.flags.test(f)) out.push_back(key_factor_label(f));
      }
      break;
    case Dimension::road_category:
      // Labels are owned strings; map onto the static row names.
      {
        static const std::string kNames[] = {"Rural Highway", "Rural Non-highway", "Urban Highway",
                                             "Urban Non-highway"};
        auto label = road_category_label(road_category(r));
        bool found = false;
        for (const auto& n : kNames) {
          if (n == label) {
            out.push_back(n);
            found = true;
          }
        }
        if (!found) out.push_back(kUnknownLabel);
      }
      break;
  }
}

std::optional<double> share_of(std::int64_t part, std::int64_t whole) {
  if (whole <= 0) return std::nullopt;
  return 100.0 * static_cast<double>(part) / static_cast<double>(whole);
}

}  // namespace

CategoryBreakdown breakdown(const DatasetSnapshot& snapshot, Dimension dimension, Scope scope,
                            const QueryFilter& filter, const BreakdownOptions& options) {
  const auto selected = select_records(snapshot, scope, filter);
  const auto labels = row_labels(dimension, options);
  std::map<std::string_view, Counter> counters;
  for (const auto& l : labels) counters[l];

  std::vector<std::string_view> record_labels;
  for (auto i : selected) {
    const auto& r = snapshot.records()[i];
    labels_of(r, dimension, options, record_labels);
    for (auto l : record_labels) counters[l].add(r.severity);
  }

  CategoryBreakdown out;
  out.dimension = dimension;
  out.scope = scope;
  out.tribe_id = filter.tribe_id;
  out.scope_total = rate_summary(snapshot, selected);
  for (const auto& l : labels) {
    const auto summary = counters[l].summary();
    out.rows.push_back({l, share_of(summary.total, out.scope_total.total), summary});
  }
  return out;
}

RoadTable road_table(const DatasetSnapshot& snapshot, Scope scope, const QueryFilter& filter) {
  const auto selected = select_records(snapshot, scope, filter);
  enum Row { kTotal, kHighway, kNonHighway, kRuralHighway, kRuralNon, kUrbanHighway, kUrbanNon, kUnclassified, kRows };
  static const char* kLabels[kRows] = {"Total Crashes",     "Highway",       "Non-highway",
                                       "Rural Highway",     "Rural Non-highway", "Urban Highway",
                                       "Urban Non-highway", "Unclassified"};
  std::array<Counter, kRows> counters{};
  for (auto i : selected) {
    const auto& r = snapshot.records()[i];
    const auto cat = road_category(r);
    counters[kTotal].add(r.severity);
    if (cat.highway == HighwayClass::highway) counters[kHighway].add(r.severity);
    if (cat.highway == HighwayClass::non_highway) counters[kNonHighway].add(r.severity);
    const bool rural = cat.area == UrbanRural::rural, urban = cat.area == UrbanRural::urban;
    if (rural && cat.highway == HighwayClass::highway) counters[kRuralHighway].add(r.severity);
    else if (rural && cat.highway == HighwayClass::non_highway) counters[kRuralNon].add(r.severity);
    else if (urban && cat.highway == HighwayClass::highway) counters[kUrbanHighway].add(r.severity);
    else if (urban && cat.highway == HighwayClass::non_highway) counters[kUrbanNon].add(r.severity);
    else counters[kUnclassified].add(r.severity);
  }
  RoadTable out;
  out.scope = scope;
  out.tribe_id = filter.tribe_id;
  for (int row = 0; row < kRows; ++row) out.rows.push_back({kLabels[row], counters[row].summary()});
  return out;
}

// ---------------------------------------------------------------------------
// rankings

namespace {

// Sign of a.part/a.total - b.part/b.total, exactly.
int compare_rates(std::int64_t a_part, std::int64_t a_total, std::int64_t b_part, std::int64_t b_total) {
  const __int128 lhs = static_cast<__int128>(a_part) * b_total;
  const __int128 rhs = static_cast<__int128>(b_part) * a_total;
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

template <typename Primary, typename Secondary>
std::vector<std::size_t> order_by(const std::vector<TribeTotals>& tribes, Primary primary,
                                  Secondary secondary) {
  std::vector<std::size_t> order(tribes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    const auto& a = tribes[x].summary;
    const auto& b = tribes[y].summary;
    if (int c = compare_rates(primary(a), a.total, primary(b), b.total)) return c > 0;
    if (int c = compare_rates(secondary(a), a.total, secondary(b), b.total)) return c > 0;
    if (a.total != b.total) return a.total > b.total;
    if (tribes[x].name != tribes[y].name) return tribes[x].name < tribes[y].name;
    return tribes[x].tribe_id < tribes[y].tribe_id;
  });
  return order;
}

}  // namespace

TribeRanking rank_tribes(std::vector<TribeTotals> tribes) {
  auto kab = [](const RateSummary& s) { return s.kab; };
  auto ka = [](const RateSummary& s) { return s.ka; };
  const auto by_kab = order_by(tribes, kab, ka);
  const auto by_ka = order_by(tribes, ka, kab);

  std::vector<int> ka_rank(tribes.size());
  for (std::size_t pos = 0; pos < by_ka.size(); ++pos) ka_rank[by_ka[pos]] = static_cast<int>(pos) + 1;

  TribeRanking out;
  for (std::size_t pos = 0; pos < by_kab.size(); ++pos) {
    auto& t = tribes[by_kab[pos]];
    out.rows.push_back({std::move(t.tribe_id), std::move(t.name), t.summary,
                        static_cast<int>(pos) + 1, ka_rank[by_kab[pos]]});
  }
  return out;
}

TribeRanking tribe_rankings(const DatasetSnapshot& snapshot, const QueryFilter& filter) {
  const auto selected = select_records(snapshot, Scope::tribal, filter);
  std::map<std::string, Counter> per_tribe;
  for (auto i : selected) per_tribe[*snapshot.tribe_of(i)].add(snapshot.records()[i].severity);

  std::vector<TribeTotals> tribes;
  for (const auto& [id, counter] : per_tribe) {
    tribes.push_back({id, snapshot.tribe_name(id), counter.summary()});
  }
  return rank_tribes(std::move(tribes));
}

// ---------------------------------------------------------------------------
// crash types

std::string crash_type_key(std::string_view label) {
  auto t = text::trim(label);
  if (t.empty()) return text::to_lower(kUnknownLabel);
  return text::to_lower(t);
}

CrashTypeComparison top_crash_types(const DatasetSnapshot& snapshot, int n, CrashTypeWeight weight,
                                    const QueryFilter& filter) {
  if (n < 1) throw InvalidArgument("n", "n must be a positive integer");
  QueryFilter statewide_filter = filter;
  statewide_filter.tribe_id.reset();
  const auto statewide = select_records(snapshot, Scope::statewide, statewide_filter);
  const TribeBoundary* tribe = filter.tribe_id ? snapshot.resolver().find(*filter.tribe_id) : nullptr;
  if (filter.tribe_id && !tribe) {
    throw InvalidArgument("tribe_id", "unknown tribe_id '" + *filter.tribe_id + "'");
  }

  struct Tally {
    std::string display;
    std::int64_t tribal = 0;
    std::int64_t statewide = 0;
  };
  std::unordered_map<std::string, Tally> by_key;
  CrashTypeComparison out;
  out.weight = weight;
  for (auto i : statewide) {
    const auto& r = snapshot.records()[i];
    if (weight == CrashTypeWeight::kab && !in_group(r.severity, SeverityGroup::KAB)) continue;
    auto trimmed = text::trim(r.crash_type);
    std::string display = trimmed.empty() ? std::string(kUnknownLabel) : std::string(trimmed);
    auto& t = by_key[crash_type_key(r.crash_type)];
    if (t.display.empty() || display < t.display) t.display = std::move(display);
    ++t.statewide;
    ++out.statewide_base;
    const auto& tid = snapshot.tribe_of(i);
    if (tid && (!tribe || *tid == tribe->tribe_id)) {
      ++t.tribal;
      ++out.tribal_base;
    }
  }

  auto pct = [](std::int64_t part, std::int64_t base) {
    return base > 0 ? 100.0 * static_cast<double>(part) / static_cast<double>(base) : 0.0;
  };
  std::vector<CrashTypeRow> rows;
  rows.reserve(by_key.size());
  for (auto& [key, t] : by_key) {
    rows.push_back({std::move(t.display), t.tribal, pct(t.tribal, out.tribal_base), t.statewide,
                    pct(t.statewide, out.statewide_base)});
  }
  std::sort(rows.begin(), rows.end(), [](const CrashTypeRow& a, const CrashTypeRow& b) {
    if (a.tribal_count != b.tribal_count) return a.tribal_count > b.tribal_count;
    if (a.statewide_count != b.statewide_count) return a.statewide_count > b.statewide_count;
    return a.label < b.label;
  });
  if (rows.size() > static_cast<std::size_t>(n)) rows.resize(static_cast<std::size_t>(n));
  out.rows = std::move(rows);
  return out;
}

std::string format_percent(std::optional<double> percent, int decimals) {
  if (!percent) return "";
  // Half away from zero, the way spreadsheet-produced tables round.
  const double scale = std::pow(10.0, decimals);
  const double rounded = std::round(*percent * scale) / scale;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, rounded == 0.0 ? 0.0 : rounded);
  return buf;
}

}  // namespace crashdash
