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

#include "crashdash/ingest.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>

#include "crashdash/csv.hpp"
#include "crashdash/digest.hpp"
#include "crashdash/error.hpp"
#include "crashdash/text.hpp"

namespace crashdash {

namespace {

struct Violation {
  std::string field;
  std::string message;
};

class HeaderIndex {
 public:
  HeaderIndex(const std::vector<std::string>& header, std::string_view file) : file_(file) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      index_.emplace(text::to_lower(text::trim(header[i])), i);
    }
    width_ = header.size();
  }

  std::size_t require(const std::string& column) const {
    auto it = index_.find(text::to_lower(column));
    if (it == index_.end()) {
      throw IngestError("missing column '" + column + "' in " + std::string(file_) + " header");
    }
    return it->second;
  }

  std::size_t width() const { return width_; }

 private:
  std::string_view file_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t width_ = 0;
};

struct CrashColumns {
  std::size_t crash_id, crash_date, longitude, latitude, crshloc, crshjur, agcytype, trbcode,
      trbname, road_functional, urban_rural, crash_type, speeding, impaired, pedestrian, hitrun,
      beltnonuse;
};

struct PersonColumns {
  std::size_t crash_id, role, sex, age, injury;
};

std::optional<bool> parse_flag(std::string_view t) {
  t = text::trim(t);
  if (t.empty() || t == "0" || text::iequals(t, "false") || text::iequals(t, "n")) return false;
  if (t == "1" || text::iequals(t, "true") || text::iequals(t, "y")) return true;
  return std::nullopt;
}

std::optional<std::string> optional_text(std::string_view t) {
  t = text::trim(t);
  if (t.empty()) return std::nullopt;
  return std::string(t);
}

std::optional<Violation> parse_crash_row(const std::vector<std::string>& f, const CrashColumns& c,
                                         CrashRecord& out) {
  out.crash_id = std::string(text::trim(f[c.crash_id]));
  if (out.crash_id.empty()) return Violation{"crash_id", "empty"};

  auto date_text = text::trim(f[c.crash_date]);
  if (date_text.empty()) return Violation{"crash_date", "empty"};
  auto date = parse_iso_date(date_text);
  if (!date) return Violation{"crash_date", "not an ISO 8601 date"};
  out.crash_date = *date;

  auto lon_text = text::trim(f[c.longitude]);
  auto lat_text = text::trim(f[c.latitude]);
  if (lon_text.empty() && lat_text.empty()) {
    out.location.reset();
  } else {
    if (lon_text.empty()) return Violation{"longitude", "empty while latitude is set"};
    if (lat_text.empty()) return Violation{"latitude", "empty while longitude is set"};
    auto lon = text::parse_double(lon_text);
    if (!lon) return Violation{"longitude", "not a number"};
    if (*lon < -180.0 || *lon > 180.0) return Violation{"longitude", "out of range [-180, 180]"};
    auto lat = text::parse_double(lat_text);
    if (!lat) return Violation{"latitude", "not a number"};
    if (*lat < -90.0 || *lat > 90.0) return Violation{"latitude", "out of range [-90, 90]"};
    out.location = GeoPoint{*lon, *lat};
  }

  out.crash_location_class = parse_crash_location_class(f[c.crshloc]);
  out.jurisdiction = parse_jurisdiction(f[c.crshjur]);
  out.agency_type = parse_agency_type(f[c.agcytype]);
  out.tribal_code = optional_text(f[c.trbcode]);
  out.tribal_name = optional_text(f[c.trbname]);
  out.road_functional = parse_road_functional(f[c.road_functional]);
  out.urban_rural = parse_urban_rural(f[c.urban_rural]);
  out.crash_type = std::string(text::trim(f[c.crash_type]));

  struct FlagColumn {
    std::size_t column;
    const char* name;
    bool KeyFactorFlags::*member;
  };
  const FlagColumn flags[] = {
      {c.speeding, "flag_speeding", &KeyFactorFlags::speeding},
      {c.impaired, "flag_impaired", &KeyFactorFlags::impaired},
      {c.pedestrian, "flag_pedestrian", &KeyFactorFlags::pedestrian_involved},
      {c.hitrun, "flag_hitrun", &KeyFactorFlags::hit_and_run},
      {c.beltnonuse, "flag_beltnonuse", &KeyFactorFlags::safety_belt},
  };
  for (const auto& flag : flags) {
    auto v = parse_flag(f[flag.column]);
    if (!v) return Violation{flag.name, "expected 0 or 1"};
    out.flags.*flag.member = *v;
  }
  return std::nullopt;
}

std::optional<Violation> parse_person_row(const std::vector<std::string>& f,
                                          const PersonColumns& c, PersonRecord& out) {
  if (text::trim(f[c.crash_id]).empty()) return Violation{"crash_id", "empty"};
  auto injury = parse_severity(f[c.injury]);
  if (!injury) return Violation{"injury", "not a KABCO code"};
  out.injury = *injury;
  out.role = parse_person_role(f[c.role]);
  out.sex = parse_sex(f[c.sex]);
  auto age_text = text::trim(f[c.age]);
  if (age_text.empty() || text::iequals(age_text, "unknown") || text::iequals(age_text, "u")) {
    out.age.reset();
  } else {
    auto age = text::parse_int(age_text);
    if (!age) return Violation{"age", "not an integer"};
    if (*age < 0 || *age > 120) return Violation{"age", "out of range [0, 120]"};
    out.age = static_cast<int>(*age);
  }
  return std::nullopt;
}

}  // namespace

void CsvSchema::apply_overrides(const std::map<std::string, std::string>& overrides) {
  const std::pair<const char*, std::string CsvSchema::*> fields[] = {
      {"crash_id", &CsvSchema::crash_id},
      {"crash_date", &CsvSchema::crash_date},
      {"longitude", &CsvSchema::longitude},
      {"latitude", &CsvSchema::latitude},
      {"crshloc", &CsvSchema::crshloc},
      {"crshjur", &CsvSchema::crshjur},
      {"agcytype", &CsvSchema::agcytype},
      {"trbcode", &CsvSchema::trbcode},
      {"trbname", &CsvSchema::trbname},
      {"road_functional", &CsvSchema::road_functional},
      {"urban_rural", &CsvSchema::urban_rural},
      {"crash_type", &CsvSchema::crash_type},
      {"flag_speeding", &CsvSchema::flag_speeding},
      {"flag_impaired", &CsvSchema::flag_impaired},
      {"flag_pedestrian", &CsvSchema::flag_pedestrian},
      {"flag_hitrun", &CsvSchema::flag_hitrun},
      {"flag_beltnonuse", &CsvSchema::flag_beltnonuse},
      {"person_crash_id", &CsvSchema::person_crash_id},
      {"role", &CsvSchema::role},
      {"sex", &CsvSchema::sex},
      {"age", &CsvSchema::age},
      {"injury", &CsvSchema::injury},
  };
  for (const auto& [logical, column] : overrides) {
    bool found = false;
    for (const auto& [name, member] : fields) {
      if (logical == name) {
        this->*member = column;
        found = true;
        break;
      }
    }
    if (!found) throw InvalidArgument(logical, "unknown schema field '" + logical + "'");
  }
}

IngestResult parse_crash_csv(std::string_view crash_csv, std::string_view person_csv,
                             const CsvSchema& schema) {
  IngestResult result;
  auto& report = result.report;
  report.crashes.digest = sha256_hex(crash_csv);
  report.persons.digest = sha256_hex(person_csv);
  report.source_digest =
      sha256_hex("crashes:" + report.crashes.digest + "\npersons:" + report.persons.digest + "\n");

  CsvReader crash_reader(crash_csv);
  CsvRecord rec;
  if (!crash_reader.next(rec) || rec.error) throw IngestError("crash file: missing header row");
  HeaderIndex crash_header(rec.fields, "crash file");
  const CrashColumns cc{
      crash_header.require(schema.crash_id),        crash_header.require(schema.crash_date),
      crash_header.require(schema.longitude),       crash_header.require(schema.latitude),
      crash_header.require(schema.crshloc),         crash_header.require(schema.crshjur),
      crash_header.require(schema.agcytype),        crash_header.require(schema.trbcode),
      crash_header.require(schema.trbname),         crash_header.require(schema.road_functional),
      crash_header.require(schema.urban_rural),     crash_header.require(schema.crash_type),
      crash_header.require(schema.flag_speeding),   crash_header.require(schema.flag_impaired),
      crash_header.require(schema.flag_pedestrian), crash_header.require(schema.flag_hitrun),
      crash_header.require(schema.flag_beltnonuse),
  };

  std::unordered_map<std::string, std::size_t> by_id;
  std::size_t row = 0;
  while (crash_reader.next(rec)) {
    ++row;
    auto reject = [&](std::string field, std::string message) {
      report.crashes.rejected.push_back({row, std::move(field), std::move(message)});
    };
    if (rec.error) {
      reject("row", *rec.error);
      continue;
    }
    if (rec.fields.size() != crash_header.width()) {
      reject("row", "expected " + std::to_string(crash_header.width()) + " columns, got " +
                        std::to_string(rec.fields.size()));
      continue;
    }
    CrashRecord crash;
    if (auto v = parse_crash_row(rec.fields, cc, crash)) {
      reject(std::move(v->field), std::move(v->message));
      continue;
    }
    if (by_id.contains(crash.crash_id)) {
      reject("crash_id", "duplicate");
      continue;
    }
    by_id.emplace(crash.crash_id, result.records.size());
    result.records.push_back(std::move(crash));
  }
  report.crashes.data_rows = row;
  report.crashes.accepted_count = result.records.size();

  if (!text::trim(person_csv).empty()) {
    CsvReader person_reader(person_csv);
    if (!person_reader.next(rec) || rec.error) throw IngestError("person file: missing header row");
    HeaderIndex person_header(rec.fields, "person file");
    const PersonColumns pc{
        person_header.require(schema.person_crash_id), person_header.require(schema.role),
        person_header.require(schema.sex),             person_header.require(schema.age),
        person_header.require(schema.injury),
    };
    row = 0;
    while (person_reader.next(rec)) {
      ++row;
      auto reject = [&](std::string field, std::string message) {
        report.persons.rejected.push_back({row, std::move(field), std::move(message)});
      };
      if (rec.error) {
        reject("row", *rec.error);
        continue;
      }
      if (rec.fields.size() != person_header.width()) {
        reject("row", "expected " + std::to_string(person_header.width()) + " columns, got " +
                          std::to_string(rec.fields.size()));
        continue;
      }
      PersonRecord person;
      if (auto v = parse_person_row(rec.fields, pc, person)) {
        reject(std::move(v->field), std::move(v->message));
        continue;
      }
      auto it = by_id.find(std::string(text::trim(rec.fields[pc.crash_id])));
      if (it == by_id.end()) {
        reject("crash_id", "no accepted crash with this id");
        continue;
      }
      result.records[it->second].persons.push_back(person);
      ++report.persons.accepted_count;
    }
    report.persons.data_rows = row;
  }

  for (auto& crash : result.records) crash.severity = derive_crash_severity(crash.persons);
  return result;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IngestError("cannot read '" + path.string() + "'");
  return std::move(buf).str();
}

}  // namespace crashdash
