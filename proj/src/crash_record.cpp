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

#include "crashdash/crash_record.hpp"

#include <cctype>
#include <chrono>
#include <cstdio>

#include "crashdash/text.hpp"

namespace crashdash {

namespace {

// Normalises DT4000 attribute text for lookup: lowercase, with anything that
// is not a letter or digit dropped ("Indian Reservation/Trust" ->
// "indianreservationtrust").
std::string squash(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (unsigned char c : s) {
    if (std::isalnum(c)) out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

bool all_digits(std::string_view s) {
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

}  // namespace

bool KeyFactorFlags::test(KeyFactor f) const {
  switch (f) {
    case KeyFactor::speeding: return speeding;
    case KeyFactor::impaired: return impaired;
    case KeyFactor::pedestrian: return pedestrian_involved;
    case KeyFactor::hit_and_run: return hit_and_run;
    case KeyFactor::safety_belt: return safety_belt;
  }
  return false;
}

std::optional<Date> parse_iso_date(std::string_view t) {
  t = text::trim(t);
  if (t.size() != 10 || t[4] != '-' || t[7] != '-') return std::nullopt;
  auto y = t.substr(0, 4), m = t.substr(5, 2), d = t.substr(8, 2);
  if (!all_digits(y) || !all_digits(m) || !all_digits(d)) return std::nullopt;
  Date out{static_cast<int>(*text::parse_int(y)), static_cast<int>(*text::parse_int(m)),
           static_cast<int>(*text::parse_int(d))};
  std::chrono::year_month_day ymd{std::chrono::year{out.year},
                                  std::chrono::month{static_cast<unsigned>(out.month)},
                                  std::chrono::day{static_cast<unsigned>(out.day)}};
  if (!ymd.ok()) return std::nullopt;
  return out;
}

std::string format_iso_date(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", d.year, d.month, d.day);
  return buf;
}

CrashLocationClass parse_crash_location_class(std::string_view t) {
  auto s = squash(t);
  if (s == "publicproperty" || s == "public") return CrashLocationClass::public_property;
  if (s == "privateproperty" || s == "private") return CrashLocationClass::private_property;
  if (s == "triballand" || s == "tribal") return CrashLocationClass::tribal_land;
  return CrashLocationClass::unknown;
}

Jurisdiction parse_jurisdiction(std::string_view t) {
  auto s = squash(t);
  if (s == "nospecialjurisdiction" || s == "none") return Jurisdiction::none;
  if (s == "collegeuniversitycampus" || s == "collegecampus" || s == "universitycampus") {
    return Jurisdiction::college_campus;
  }
  if (s == "military") return Jurisdiction::military;
  if (s == "nationalparkservice" || s == "nationalpark") return Jurisdiction::national_park;
  if (s == "indianreservationtrust" || s == "indianreservation") {
    return Jurisdiction::indian_reservation_trust;
  }
  if (s == "other") return Jurisdiction::other;
  return Jurisdiction::unknown;
}

AgencyType parse_agency_type(std::string_view t) {
  auto s = squash(t);
  if (s == "statepatrol") return AgencyType::state_patrol;
  if (s == "countysheriff") return AgencyType::county_sheriff;
  if (s == "citypolice") return AgencyType::city_police;
  if (s == "tribal" || s == "tribalpolice") return AgencyType::tribal;
  if (s == "other") return AgencyType::other;
  return AgencyType::unknown;
}

RoadFunctional parse_road_functional(std::string_view t) {
  auto s = squash(t);
  if (s == "sth") return RoadFunctional::STH;
  if (s == "ush") return RoadFunctional::USH;
  if (s == "ih") return RoadFunctional::IH;
  if (s == "cth") return RoadFunctional::CTH;
  if (s == "local") return RoadFunctional::local;
  if (s == "other") return RoadFunctional::other;
  return RoadFunctional::unknown;
}

UrbanRural parse_urban_rural(std::string_view t) {
  auto s = squash(t);
  if (s == "u" || s == "urban") return UrbanRural::urban;
  if (s == "r" || s == "rural") return UrbanRural::rural;
  return UrbanRural::unknown;
}

PersonRole parse_person_role(std::string_view t) {
  auto s = squash(t);
  if (s == "driver") return PersonRole::driver;
  if (s == "passenger") return PersonRole::passenger;
  if (s == "pedestrian") return PersonRole::pedestrian;
  return PersonRole::other;
}

Sex parse_sex(std::string_view t) {
  auto s = squash(t);
  if (s == "f" || s == "female") return Sex::female;
  if (s == "m" || s == "male") return Sex::male;
  return Sex::unknown;
}

std::string_view to_string(CrashLocationClass v) {
  switch (v) {
    case CrashLocationClass::public_property: return "Public Property";
    case CrashLocationClass::private_property: return "Private Property";
    case CrashLocationClass::tribal_land: return "Tribal Land";
    case CrashLocationClass::unknown: break;
  }
  return "";
}

std::string_view to_string(Jurisdiction v) {
  switch (v) {
    case Jurisdiction::none: return "No Special Jurisdiction";
    case Jurisdiction::college_campus: return "College/University Campus";
    case Jurisdiction::military: return "Military";
    case Jurisdiction::national_park: return "National Park Service";
    case Jurisdiction::indian_reservation_trust: return "Indian Reservation/Trust";
    case Jurisdiction::other: return "Other";
    case Jurisdiction::unknown: break;
  }
  return "";
}

std::string_view to_string(AgencyType v) {
  switch (v) {
    case AgencyType::state_patrol: return "State Patrol";
    case AgencyType::county_sheriff: return "County Sheriff";
    case AgencyType::city_police: return "City Police";
    case AgencyType::tribal: return "Tribal";
    case AgencyType::other: return "Other";
    case AgencyType::unknown: break;
  }
  return "";
}

std::string_view to_string(RoadFunctional v) {
  switch (v) {
    case RoadFunctional::STH: return "STH";
    case RoadFunctional::USH: return "USH";
    case RoadFunctional::IH: return "IH";
    case RoadFunctional::CTH: return "CTH";
    case RoadFunctional::local: return "LOCAL";
    case RoadFunctional::other: return "OTHER";
    case RoadFunctional::unknown: break;
  }
  return "";
}

std::string_view to_string(UrbanRural v) {
  switch (v) {
    case UrbanRural::urban: return "U";
    case UrbanRural::rural: return "R";
    case UrbanRural::unknown: break;
  }
  return "";
}

std::string_view to_string(PersonRole v) {
  switch (v) {
    case PersonRole::driver: return "driver";
    case PersonRole::passenger: return "passenger";
    case PersonRole::pedestrian: return "pedestrian";
    case PersonRole::other: return "other";
  }
  return "other";
}

std::string_view to_string(Sex v) {
  switch (v) {
    case Sex::female: return "F";
    case Sex::male: return "M";
    case Sex::unknown: return "U";
  }
  return "U";
}

std::string_view to_string(KeyFactor v) {
  switch (v) {
    case KeyFactor::speeding: return "speeding";
    case KeyFactor::impaired: return "impaired";
    case KeyFactor::pedestrian: return "pedestrian";
    case KeyFactor::hit_and_run: return "hit_and_run";
    case KeyFactor::safety_belt: return "safety_belt";
  }
  return "";
}

std::optional<KeyFactor> parse_key_factor(std::string_view t) {
  t = text::trim(t);
  for (auto f : {KeyFactor::speeding, KeyFactor::impaired, KeyFactor::pedestrian,
                 KeyFactor::hit_and_run, KeyFactor::safety_belt}) {
    if (text::iequals(t, to_string(f))) return f;
  }
  return std::nullopt;
}

}  // namespace crashdash
