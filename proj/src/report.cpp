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

#include "crashdash/report.hpp"

#include "crashdash/csv.hpp"

namespace crashdash {

namespace {

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }
Json optional_string(const std::optional<std::string>& v) { return v ? Json(*v) : Json(nullptr); }

std::optional<double> read_optional_number(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

std::optional<std::string> read_optional_string(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<std::string>();
}

template <typename Enum, typename Parser>
Enum read_enum(const Json& j, Parser parse) {
  auto v = parse(j.get<std::string>());
  if (!v) throw Json::other_error::create(501, "unknown enum value '" + j.get<std::string>() + "'", &j);
  return *v;
}

std::string count(std::int64_t v) { return std::to_string(v); }

}  // namespace

SummaryResult summarize(const DatasetSnapshot& snapshot, Scope scope, const QueryFilter& filter) {
  const auto selected = select_records(snapshot, scope, filter);
  return {scope, filter.tribe_id, rate_summary(snapshot, selected), injury_counts(snapshot, selected)};
}

// ---------------------------------------------------------------------------
// JSON

Json to_json(const RateSummary& s) {
  Json j;
  j["total"] = s.total;
  j["kab"] = s.kab;
  j["kab_rate"] = optional_number(s.kab_rate);
  j["ka"] = s.ka;
  j["ka_rate"] = optional_number(s.ka_rate);
  return j;
}

RateSummary rate_summary_from_json(const Json& j) {
  return {j.at("total").get<std::int64_t>(), j.at("kab").get<std::int64_t>(),
          j.at("ka").get<std::int64_t>(), read_optional_number(j.at("kab_rate")),
          read_optional_number(j.at("ka_rate"))};
}

Json to_json(const SummaryResult& r) {
  Json j;
  j["scope"] = to_string(r.scope);
  j["tribe_id"] = optional_string(r.tribe_id);
  j["summary"] = to_json(r.summary);
  Json injuries;
  for (auto s : kAllSeverities) injuries[std::string(1, severity_code(s))] = r.injuries.at(s);
  j["injury_counts"] = std::move(injuries);
  return j;
}

SummaryResult summary_from_json(const Json& j) {
  SummaryResult r;
  r.scope = read_enum<Scope>(j.at("scope"), parse_scope);
  r.tribe_id = read_optional_string(j.at("tribe_id"));
  r.summary = rate_summary_from_json(j.at("summary"));
  for (auto s : kAllSeverities) {
    r.injuries.by_severity[static_cast<std::size_t>(s)] =
        j.at("injury_counts").at(std::string(1, severity_code(s))).get<std::int64_t>();
  }
  return r;
}

Json to_json(const CategoryBreakdown& b) {
  Json j;
  j["dimension"] = to_string(b.dimension);
  j["scope"] = to_string(b.scope);
  j["tribe_id"] = optional_string(b.tribe_id);
  j["scope_total"] = to_json(b.scope_total);
  Json rows = Json::array();
  for (const auto& row : b.rows) {
    Json r;
    r["label"] = row.label;
    r["share"] = optional_number(row.share);
    r["summary"] = to_json(row.summary);
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j;
}

CategoryBreakdown breakdown_from_json(const Json& j) {
  CategoryBreakdown b;
  b.dimension = read_enum<Dimension>(j.at("dimension"), parse_dimension);
  b.scope = read_enum<Scope>(j.at("scope"), parse_scope);
  b.tribe_id = read_optional_string(j.at("tribe_id"));
  b.scope_total = rate_summary_from_json(j.at("scope_total"));
  for (const auto& r : j.at("rows")) {
    b.rows.push_back({r.at("label").get<std::string>(), read_optional_number(r.at("share")),
                      rate_summary_from_json(r.at("summary"))});
  }
  return b;
}

Json to_json(const RoadTable& t) {
  Json j;
  j["scope"] = to_string(t.scope);
  j["tribe_id"] = optional_string(t.tribe_id);
  Json rows = Json::array();
  for (const auto& row : t.rows) {
    Json r;
    r["label"] = row.label;
    r["summary"] = to_json(row.summary);
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j;
}

RoadTable road_table_from_json(const Json& j) {
  RoadTable t;
  t.scope = read_enum<Scope>(j.at("scope"), parse_scope);
  t.tribe_id = read_optional_string(j.at("tribe_id"));
  for (const auto& r : j.at("rows")) {
    t.rows.push_back({r.at("label").get<std::string>(), rate_summary_from_json(r.at("summary"))});
  }
  return t;
}

Json to_json(const TribeRanking& ranking) {
  Json j;
  Json rows = Json::array();
  for (const auto& row : ranking.rows) {
    Json r;
    r["tribe_id"] = row.tribe_id;
    r["name"] = row.name;
    r["summary"] = to_json(row.summary);
    r["kab_rank"] = row.kab_rank;
    r["ka_rank"] = row.ka_rank;
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j;
}

TribeRanking ranking_from_json(const Json& j) {
  TribeRanking out;
  for (const auto& r : j.at("rows")) {
    out.rows.push_back({r.at("tribe_id").get<std::string>(), r.at("name").get<std::string>(),
                        rate_summary_from_json(r.at("summary")), r.at("kab_rank").get<int>(),
                        r.at("ka_rank").get<int>()});
  }
  return out;
}

Json to_json(const CrashTypeComparison& c) {
  Json j;
  j["weight"] = to_string(c.weight);
  j["tribal_base"] = c.tribal_base;
  j["statewide_base"] = c.statewide_base;
  Json rows = Json::array();
  for (const auto& row : c.rows) {
    Json r;
    r["label"] = row.label;
    r["tribal_count"] = row.tribal_count;
    r["tribal_percent"] = row.tribal_percent;
    r["statewide_count"] = row.statewide_count;
    r["statewide_percent"] = row.statewide_percent;
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j;
}

CrashTypeComparison crash_types_from_json(const Json& j) {
  CrashTypeComparison c;
  c.weight = read_enum<CrashTypeWeight>(j.at("weight"), parse_crash_type_weight);
  c.tribal_base = j.at("tribal_base").get<std::int64_t>();
  c.statewide_base = j.at("statewide_base").get<std::int64_t>();
  for (const auto& r : j.at("rows")) {
    c.rows.push_back({r.at("label").get<std::string>(), r.at("tribal_count").get<std::int64_t>(),
                      r.at("tribal_percent").get<double>(), r.at("statewide_count").get<std::int64_t>(),
                      r.at("statewide_percent").get<double>()});
  }
  return c;
}

// ---------------------------------------------------------------------------
// CSV

std::string to_csv(const SummaryResult& r) {
  std::string out;
  append_csv_row(out, {"scope", "tribe_id", "total", "kab", "kab_rate", "ka", "ka_rate", "K", "A",
                       "B", "C", "O"});
  const auto& s = r.summary;
  append_csv_row(out, std::vector<std::string>{
                          std::string(to_string(r.scope)), r.tribe_id.value_or(""), count(s.total),
                          count(s.kab), format_percent(s.kab_rate, 1), count(s.ka),
                          format_percent(s.ka_rate, 1), count(r.injuries.at(Severity::K)),
                          count(r.injuries.at(Severity::A)), count(r.injuries.at(Severity::B)),
                          count(r.injuries.at(Severity::C)), count(r.injuries.at(Severity::O))});
  return out;
}

std::string to_csv(const CategoryBreakdown& b) {
  std::string out;
  append_csv_row(out, {"label", "total", "share", "kab", "kab_rate", "ka", "ka_rate"});
  auto row = [&](const std::string& label, const std::optional<double>& share, const RateSummary& s) {
    append_csv_row(out, std::vector<std::string>{label, count(s.total), format_percent(share, 1),
                                                 count(s.kab), format_percent(s.kab_rate, 1),
                                                 count(s.ka), format_percent(s.ka_rate, 1)});
  };
  for (const auto& r : b.rows) row(r.label, r.share, r.summary);
  row("Grand Total", std::nullopt, b.scope_total);
  return out;
}

std::string to_csv(const RoadTable& t) {
  std::string out;
  append_csv_row(out, {"category", "total", "kab", "kab_rate", "ka", "ka_rate"});
  for (const auto& r : t.rows) {
    const auto& s = r.summary;
    append_csv_row(out, std::vector<std::string>{r.label, count(s.total), count(s.kab),
                                                 format_percent(s.kab_rate, 1), count(s.ka),
                                                 format_percent(s.ka_rate, 1)});
  }
  return out;
}

std::string to_csv(const TribeRanking& ranking) {
  std::string out;
  append_csv_row(out, {"tribe_id", "name", "total", "kab", "kab_rate", "ka", "ka_rate", "kab_rank",
                       "ka_rank"});
  for (const auto& r : ranking.rows) {
    const auto& s = r.summary;
    append_csv_row(out, std::vector<std::string>{r.tribe_id, r.name, count(s.total), count(s.kab),
                                                 format_percent(s.kab_rate, 2), count(s.ka),
                                                 format_percent(s.ka_rate, 2),
                                                 std::to_string(r.kab_rank), std::to_string(r.ka_rank)});
  }
  return out;
}

std::string to_csv(const CrashTypeComparison& c) {
  std::string out;
  append_csv_row(out, {"crash_type", "tribal_count", "tribal_percent", "statewide_count",
                       "statewide_percent"});
  for (const auto& r : c.rows) {
    append_csv_row(out, std::vector<std::string>{r.label, count(r.tribal_count),
                                                 format_percent(r.tribal_percent, 1),
                                                 count(r.statewide_count),
                                                 format_percent(r.statewide_percent, 1)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// ingest metadata

Json snapshot_info_to_json(const SnapshotInfo& info) {
  Json j;
  j["snapshot_id"] = info.snapshot_id;
  j["ingested_at"] = info.ingested_at;
  j["record_count"] = info.record_count;
  j["tribal_count"] = info.tribal_count;
  j["conflict_count"] = info.conflict_count;
  j["attribute_count"] = info.attribute_count;
  j["spatial_count"] = info.spatial_count;
  j["crshloc_tribal_count"] = info.crshloc_tribal_count;
  j["rejected_rows"] = info.rejected_rows;
  j["source_digest"] = info.source_digest;
  return j;
}

namespace {

Json file_report_to_json(const FileReport& f) {
  Json j;
  j["data_rows"] = f.data_rows;
  j["accepted_count"] = f.accepted_count;
  j["digest"] = f.digest;
  Json rejected = Json::array();
  for (const auto& r : f.rejected) {
    rejected.push_back(Json{{"row", r.row_number}, {"field", r.field}, {"message", r.message}});
  }
  j["rejected"] = std::move(rejected);
  return j;
}

}  // namespace

Json ingest_report_to_json(const IngestReport& report) {
  Json j;
  j["source_digest"] = report.source_digest;
  j["accepted_count"] = report.crashes.accepted_count;
  j["crashes"] = file_report_to_json(report.crashes);
  j["persons"] = file_report_to_json(report.persons);
  return j;
}

Json diagnostics_to_json(const IngestReport& report, const TribeDiagnostics& d) {
  Json j;
  j["ingest"] = ingest_report_to_json(report);
  Json unknown = Json::array();
  for (const auto& u : d.unknown_codes) {
    unknown.push_back(Json{{"crash_id", u.crash_id}, {"tribal_code", u.tribal_code}});
  }
  Json overlaps = Json::array();
  for (const auto& o : d.overlaps) {
    overlaps.push_back(Json{{"crash_id", o.crash_id}, {"tribe_ids", o.tribe_ids}});
  }
  Json conflicts = Json::array();
  for (const auto& c : d.conflicts) {
    conflicts.push_back(Json{{"crash_id", c.crash_id},
                             {"attribute_tribe", c.attribute_tribe},
                             {"spatial_tribe", c.spatial_tribe}});
  }
  j["unknown_tribal_codes"] = std::move(unknown);
  j["boundary_overlaps"] = std::move(overlaps);
  j["tribe_conflicts"] = std::move(conflicts);
  return j;
}

}  // namespace crashdash
