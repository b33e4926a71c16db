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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crashdash/severity.hpp"

namespace crashdash {

struct GeoPoint {
  double lon = 0.0;
  double lat = 0.0;

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

struct Date {
  int year = 1970;
  int month = 1;
  int day = 1;

  friend auto operator<=>(const Date&, const Date&) = default;
};

/// Parses a strict ISO 8601 calendar date (YYYY-MM-DD).
std::optional<Date> parse_iso_date(std::string_view text);
std::string format_iso_date(const Date& d);

enum class PersonRole : std::uint8_t { driver, passenger, pedestrian, other };
enum class Sex : std::uint8_t { female, male, unknown };

struct PersonRecord {
  PersonRole role = PersonRole::other;
  Sex sex = Sex::unknown;
  std::optional<int> age;  // [0, 120] when known
  Severity injury = Severity::O;
};

// DT4000 CRSHLOC
enum class CrashLocationClass : std::uint8_t { public_property, private_property, tribal_land, unknown };
// DT4000 CRSHJUR
enum class Jurisdiction : std::uint8_t {
  none,
  college_campus,
  military,
  national_park,
  indian_reservation_trust,
  other,
  unknown
};
// DT4000 AGCYTYPE
enum class AgencyType : std::uint8_t { state_patrol, county_sheriff, city_police, tribal, other, unknown };
enum class RoadFunctional : std::uint8_t { STH, USH, IH, CTH, local, other, unknown };
enum class UrbanRural : std::uint8_t { urban, rural, unknown };

enum class KeyFactor : std::uint8_t { speeding, impaired, pedestrian, hit_and_run, safety_belt };
inline constexpr int kKeyFactorCount = 5;

struct KeyFactorFlags {
  bool speeding = false;
  bool impaired = false;
  bool pedestrian_involved = false;
  bool hit_and_run = false;
  bool safety_belt = false;  // belt non-use involvement

  bool test(KeyFactor f) const;
};

struct CrashRecord {
  std::string crash_id;
  Date crash_date;
  std::optional<GeoPoint> location;
  CrashLocationClass crash_location_class = CrashLocationClass::unknown;
  Jurisdiction jurisdiction = Jurisdiction::unknown;
  AgencyType agency_type = AgencyType::unknown;
  std::optional<std::string> tribal_code;
  std::optional<std::string> tribal_name;
  RoadFunctional road_functional = RoadFunctional::unknown;
  UrbanRural urban_rural = UrbanRural::unknown;
  std::string crash_type;
  KeyFactorFlags flags;
  std::vector<PersonRecord> persons;
  Severity severity = Severity::O;
};

// Cell-level parsers. Blank or unrecognised text maps to the enum's unknown
// value; they never fail.
CrashLocationClass parse_crash_location_class(std::string_view text);
Jurisdiction parse_jurisdiction(std::string_view text);
AgencyType parse_agency_type(std::string_view text);
RoadFunctional parse_road_functional(std::string_view text);
UrbanRural parse_urban_rural(std::string_view text);
PersonRole parse_person_role(std::string_view text);
Sex parse_sex(std::string_view text);

std::string_view to_string(CrashLocationClass v);
std::string_view to_string(Jurisdiction v);
std::string_view to_string(AgencyType v);
std::string_view to_string(RoadFunctional v);
std::string_view to_string(UrbanRural v);
std::string_view to_string(PersonRole v);
std::string_view to_string(Sex v);
std::string_view to_string(KeyFactor v);

std::optional<KeyFactor> parse_key_factor(std::string_view text);

}  // namespace crashdash
