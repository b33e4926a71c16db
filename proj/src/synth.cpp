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

#include "crashdash/synth.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>

#include "crashdash/csv.hpp"
#include "crashdash/error.hpp"
#include "crashdash/severity.hpp"

namespace crashdash::synth {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Rng

std::uint64_t Rng::below(std::uint64_t n) {
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const auto x = next();
    if (x >= threshold) return x % n;
  }
}

std::size_t Rng::categorical(std::span<const double> weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  const double r = uniform() * total;
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last = i;
    if (r < acc) return i;
  }
  return last;
}

double Rng::normal() {
  if (spare_) {
    const double z = *spare_;
    spare_.reset();
    return z;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  return r * std::cos(theta);
}

BBox Lattice::bbox() const {
  return {origin_lon, origin_lat, origin_lon + step * side, origin_lat + step * side};
}

// ---------------------------------------------------------------------------
// presets

namespace {

constexpr std::array<const char*, kRoadSlots> kRoadSlotNames = {
    "rural_highway", "rural_non_highway", "urban_highway", "urban_non_highway", "unclassified"};
constexpr std::array<const char*, kAgeSlots> kAgeSlotNames = {
    "0-4", "5-14", "15-24", "25-44", "45-64", "65-74", "75+", "unknown"};
constexpr std::array<int, kAgeSlots - 1> kAgeLo = {0, 5, 15, 25, 45, 65, 75};
constexpr std::array<int, kAgeSlots - 1> kAgeHi = {4, 14, 24, 44, 64, 74, 95};
constexpr std::array<const char*, 3> kSexNames = {"female", "male", "unknown"};

// Shares K and C are not published per category; both follow the tribal
// overall ratios K/KA = 20/108 and C/(C+O) = 309/2931.
SeverityMix mix_from_counts(double total, double kab, double ka) {
  const double k = ka * 20.0 / 108.0;
  const double c = (total - kab) * 309.0 / 2931.0;
  SeverityMix m{};
  m[static_cast<int>(Severity::K)] = k / total;
  m[static_cast<int>(Severity::A)] = (ka - k) / total;
  m[static_cast<int>(Severity::B)] = (kab - ka) / total;
  m[static_cast<int>(Severity::C)] = c / total;
  m[static_cast<int>(Severity::O)] = (total - kab - c) / total;
  return m;
}

template <std::size_t N>
std::array<double, N> normalized(const std::array<double, N>& counts, double total) {
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = counts[i] / total;
  return out;
}

ScopeProfile tribal_profile() {
  ScopeProfile p;
  p.severity = mix_from_counts(3396, 465, 108);
  p.road = normalized<kRoadSlots>({543, 1040, 817, 996, 0}, 3396);
  p.road_severity = std::array<SeverityMix, kRoadSlots>{
      mix_from_counts(543, 87, 27), mix_from_counts(1040, 153, 51), mix_from_counts(817, 98, 10),
      mix_from_counts(996, 127, 20), mix_from_counts(3396, 465, 108)};
  p.sex = normalized<3>({1346, 1865, 185}, 3396);
  p.age = normalized<kAgeSlots>({0, 4, 756, 1117, 899, 258, 170, 192}, 3396);
  p.flags = normalized<kKeyFactorCount>({484, 316, 32, 336, 288}, 3396);
  p.crash_types = {{"Rear End", 0.17},   {"Angle", 0.14},          {"ANL NA", 0.14},
                   {"ANL ND", 0.04},     {"Ditch", 0.10},          {"Tree", 0.05},
                   {"Sideswipe", 0.05},  {"Parked Vehicle", 0.05}, {"Head On", 0.02},
                   {"Overturn", 0.03},   {"Pedestrian", 0.01},     {"Embankment", 0.02},
                   {"Utility Pole", 0.015}, {"Other Fixed Object", 0.04}, {"Other", 0.075}};
  return p;
}

ScopeProfile statewide_profile() {
  ScopeProfile p;
  p.severity = mix_from_counts(672363, 77516, 16450);
  p.road = normalized<kRoadSlots>({138268, 147508, 118936, 267651, 0}, 672363);
  p.road_severity = std::array<SeverityMix, kRoadSlots>{
      mix_from_counts(138268, 17061, 4460), mix_from_counts(147508, 18517, 5064),
      mix_from_counts(118936, 13901, 2383), mix_from_counts(267651, 28037, 4543),
      mix_from_counts(672363, 77516, 16450)};
  p.sex = normalized<3>({246957, 358933, 66473}, 672363);
  p.age = normalized<kAgeSlots>({33, 795, 155109, 219105, 157308, 44596, 28041, 67376}, 672363);
  p.flags = normalized<kKeyFactorCount>({94657, 40445, 6908, 97800, 50327}, 672363);
  p.crash_types = {{"Rear End", 0.26},   {"Angle", 0.20},          {"ANL NA", 0.09},
                   {"ANL ND", 0.02},     {"Ditch", 0.05},          {"Tree", 0.025},
                   {"Sideswipe", 0.07},  {"Parked Vehicle", 0.08}, {"Head On", 0.02},
                   {"Overturn", 0.015},  {"Pedestrian", 0.01},     {"Embankment", 0.01},
                   {"Utility Pole", 0.015}, {"Other Fixed Object", 0.04}, {"Other", 0.09}};
  return p;
}

}  // namespace

SynthSpec SynthSpec::wisconsin() {
  SynthSpec s;
  s.tribal = tribal_profile();
  s.statewide = statewide_profile();
  return s;
}

// ---------------------------------------------------------------------------
// validation

namespace {

template <std::size_t N>
void check_mix(const std::array<double, N>& mix, const std::string& param) {
  double sum = 0.0;
  for (double p : mix) {
    if (!std::isfinite(p) || p < 0.0) throw InvalidArgument(param, "probabilities must be >= 0");
    sum += p;
  }
  if (std::fabs(sum - 1.0) > 1e-9) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", sum);
    throw InvalidArgument(param, std::string("probabilities sum to ") + buf + ", expected 1");
  }
}

void check_profile(const ScopeProfile& p, const std::string& scope) {
  check_mix(p.severity, scope + ".severity");
  check_mix(p.road, scope + ".road");
  if (p.road_severity) {
    for (int i = 0; i < kRoadSlots; ++i) {
      check_mix((*p.road_severity)[i], scope + ".road_severity." + kRoadSlotNames[i]);
    }
  }
  check_mix(p.sex, scope + ".sex");
  check_mix(p.age, scope + ".age");
  for (double f : p.flags) {
    if (!(f >= 0.0 && f <= 1.0)) throw InvalidArgument(scope + ".flags", "flag probability outside [0, 1]");
  }
  double total = 0.0;
  for (const auto& [label, w] : p.crash_types) {
    if (!std::isfinite(w) || w < 0.0) throw InvalidArgument(scope + ".crash_types", "negative weight");
    total += w;
  }
  if (!(total > 0.0)) throw InvalidArgument(scope + ".crash_types", "needs a positive weight");
}

}  // namespace

void SynthSpec::validate() const {
  if (n_crashes < 1) throw InvalidArgument("n_crashes", "must be >= 1");
  if (!(tribal_fraction >= 0.0 && tribal_fraction <= 1.0)) {
    throw InvalidArgument("tribal_fraction", "must lie in [0, 1]");
  }
  if (year_from < 1900 || year_to > 2999 || year_from > year_to) {
    throw InvalidArgument("year_range", "expected 1900 <= year_from <= year_to <= 2999");
  }
  check_profile(tribal, "tribal");
  check_profile(statewide, "statewide");
  double intensity = 0.0;
  for (const auto& c : clusters) {
    if (!(c.intensity >= 0.0) || !(c.spread > 0.0) || !std::isfinite(c.lon) || !std::isfinite(c.lat)) {
      throw InvalidArgument("clusters", "needs finite centre, intensity >= 0, spread > 0");
    }
    intensity += c.intensity;
  }
  if (intensity > 1.0 + 1e-9) throw InvalidArgument("clusters", "intensities sum above 1");
  if (lattice && (!(lattice->step > 0.0) || lattice->side < 1)) {
    throw InvalidArgument("lattice", "needs step > 0 and side >= 1");
  }
}

// ---------------------------------------------------------------------------
// JSON

namespace {

Json severity_json(const SeverityMix& m) {
  Json j;
  for (auto s : {Severity::K, Severity::A, Severity::B, Severity::C, Severity::O}) {
    j[std::string(1, severity_code(s))] = m[static_cast<int>(s)];
  }
  return j;
}

template <std::size_t N>
Json named_json(const std::array<double, N>& v, const std::array<const char*, N>& names) {
  Json j;
  for (std::size_t i = 0; i < N; ++i) j[names[i]] = v[i];
  return j;
}

template <std::size_t N>
void read_named(const Json& j, std::array<double, N>& v, const std::array<const char*, N>& names,
                const std::string& param) {
  if (!j.is_object()) throw InvalidArgument(param, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    std::size_t i = 0;
    while (i < N && it.key() != names[i]) ++i;
    if (i == N) throw InvalidArgument(param, "unknown key '" + it.key() + "'");
  }
  for (std::size_t i = 0; i < N; ++i) v[i] = j.value(names[i], 0.0);
}

void read_severity(const Json& j, SeverityMix& m, const std::string& param) {
  if (!j.is_object()) throw InvalidArgument(param, "expected an object");
  m = {};
  for (auto it = j.begin(); it != j.end(); ++it) {
    auto s = parse_severity(it.key());
    if (!s) throw InvalidArgument(param, "unknown severity '" + it.key() + "'");
    m[static_cast<int>(*s)] = it.value().get<double>();
  }
}

constexpr std::array<const char*, kKeyFactorCount> kFlagNames = {
    "speeding", "impaired", "pedestrian", "hit_and_run", "safety_belt"};

Json profile_json(const ScopeProfile& p) {
  Json j;
  j["severity"] = severity_json(p.severity);
  j["road"] = named_json(p.road, kRoadSlotNames);
  if (p.road_severity) {
    Json rs;
    for (int i = 0; i < kRoadSlots; ++i) rs[kRoadSlotNames[i]] = severity_json((*p.road_severity)[i]);
    j["road_severity"] = std::move(rs);
  } else {
    j["road_severity"] = nullptr;
  }
  j["sex"] = named_json(p.sex, kSexNames);
  j["age"] = named_json(p.age, kAgeSlotNames);
  j["flags"] = named_json(p.flags, kFlagNames);
  Json types = Json::array();
  for (const auto& [label, w] : p.crash_types) types.push_back(Json::array({label, w}));
  j["crash_types"] = std::move(types);
  return j;
}

void read_profile(const Json& j, ScopeProfile& p, const std::string& scope) {
  if (!j.is_object()) throw InvalidArgument(scope, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const auto& key = it.key();
    const auto& v = it.value();
    const auto param = scope + "." + key;
    if (key == "severity") {
      read_severity(v, p.severity, param);
    } else if (key == "road") {
      read_named(v, p.road, kRoadSlotNames, param);
    } else if (key == "road_severity") {
      if (v.is_null()) {
        p.road_severity.reset();
        continue;
      }
      if (!v.is_object()) throw InvalidArgument(param, "expected an object or null");
      std::array<SeverityMix, kRoadSlots> rs{};
      for (int i = 0; i < kRoadSlots; ++i) {
        if (!v.contains(kRoadSlotNames[i])) throw InvalidArgument(param, std::string("missing ") + kRoadSlotNames[i]);
        read_severity(v.at(kRoadSlotNames[i]), rs[i], param);
      }
      p.road_severity = rs;
    } else if (key == "sex") {
      read_named(v, p.sex, kSexNames, param);
    } else if (key == "age") {
      read_named(v, p.age, kAgeSlotNames, param);
    } else if (key == "flags") {
      read_named(v, p.flags, kFlagNames, param);
    } else if (key == "crash_types") {
      p.crash_types.clear();
      for (const auto& e : v) {
        p.crash_types.emplace_back(e.at(0).get<std::string>(), e.at(1).get<double>());
      }
    } else {
      throw InvalidArgument(param, "unknown key");
    }
  }
}

}  // namespace

Json spec_to_json(const SynthSpec& s) {
  Json j;
  j["seed"] = s.seed;
  j["n_crashes"] = s.n_crashes;
  j["tribal_fraction"] = s.tribal_fraction;
  j["year_from"] = s.year_from;
  j["year_to"] = s.year_to;
  j["tribal"] = profile_json(s.tribal);
  j["statewide"] = profile_json(s.statewide);
  Json clusters = Json::array();
  for (const auto& c : s.clusters) {
    clusters.push_back(Json{{"lon", c.lon}, {"lat", c.lat}, {"intensity", c.intensity}, {"spread", c.spread}});
  }
  j["clusters"] = std::move(clusters);
  if (s.lattice) {
    j["lattice"] = Json{{"origin_lon", s.lattice->origin_lon},
                        {"origin_lat", s.lattice->origin_lat},
                        {"step", s.lattice->step},
                        {"side", s.lattice->side}};
  } else {
    j["lattice"] = nullptr;
  }
  return j;
}

SynthSpec spec_from_json(const Json& j) {
  if (!j.is_object()) throw InvalidArgument("spec", "expected a JSON object");
  SynthSpec s = SynthSpec::wisconsin();
  try {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const auto& key = it.key();
      const auto& v = it.value();
      if (key == "seed") {
        s.seed = v.get<std::uint64_t>();
      } else if (key == "n_crashes") {
        s.n_crashes = v.get<std::int64_t>();
      } else if (key == "tribal_fraction") {
        s.tribal_fraction = v.get<double>();
      } else if (key == "year_from") {
        s.year_from = v.get<int>();
      } else if (key == "year_to") {
        s.year_to = v.get<int>();
      } else if (key == "tribal") {
        read_profile(v, s.tribal, "tribal");
      } else if (key == "statewide") {
        read_profile(v, s.statewide, "statewide");
      } else if (key == "clusters") {
        s.clusters.clear();
        for (const auto& c : v) {
          s.clusters.push_back({c.at("lon").get<double>(), c.at("lat").get<double>(),
                                c.at("intensity").get<double>(), c.value("spread", 0.005)});
        }
      } else if (key == "lattice") {
        if (v.is_null()) {
          s.lattice.reset();
        } else {
          s.lattice = Lattice{v.at("origin_lon").get<double>(), v.at("origin_lat").get<double>(),
                              v.at("step").get<double>(), v.at("side").get<int>()};
        }
      } else {
        throw InvalidArgument(key, "unknown spec key");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("spec", e.what());
  }
  return s;
}

// ---------------------------------------------------------------------------
// reservations

namespace {

struct TribeShape {
  const char* id;
  const char* name;
  double crashes;
  std::vector<GeoPoint> outer;  // counter-clockwise, open
  std::vector<GeoPoint> hole;   // empty when none
};

const std::vector<TribeShape>& tribe_shapes() {
  static const std::vector<TribeShape> shapes = {
      {"MENOMINEE", "Menominee Indian Tribe", 74,
       {{-88.98, 44.85}, {-88.48, 44.85}, {-88.48, 45.12}, {-88.70, 45.12},
        {-88.70, 45.00}, {-88.80, 45.00}, {-88.80, 45.12}, {-88.98, 45.12}},
       {}},
      {"LCO", "Lac Courte Oreilles Band", 202,
       {{-91.45, 45.80}, {-91.15, 45.80}, {-91.15, 45.90}, {-91.30, 45.90},
        {-91.30, 46.02}, {-91.45, 46.02}},
       {}},
      {"STCROIX", "St. Croix Chippewa Indians", 29,
       {{-92.45, 45.62}, {-92.35, 45.62}, {-92.35, 45.70}, {-92.45, 45.70}}, {}},
      {"BADRIVER", "Bad River Band", 103,
       {{-90.80, 46.40}, {-90.40, 46.40}, {-90.40, 46.52}, {-90.60, 46.60}, {-90.80, 46.55}}, {}},
      {"LDF", "Lac Du Flambeau Band", 349,
       {{-90.05, 45.85}, {-89.80, 45.85}, {-89.80, 45.91}, {-89.90, 45.94},
        {-89.80, 45.97}, {-89.80, 46.02}, {-90.05, 46.02}},
       {}},
      {"SOKAOGON", "Sokaogon Chippewa Community", 14,
       {{-88.98, 45.48}, {-88.93, 45.48}, {-88.93, 45.52}, {-88.98, 45.52}}, {}},
      {"HOCHUNK", "Ho-Chunk Nation", 130,
       {{-90.75, 44.25}, {-90.55, 44.25}, {-90.55, 44.40}, {-90.75, 44.40}}, {}},
      {"ONEIDA", "Oneida Tribe Of Indians", 2277,
       {{-88.30, 44.42}, {-88.10, 44.42}, {-88.10, 44.58}, {-88.30, 44.58}},
       {{-88.22, 44.47}, {-88.22, 44.51}, {-88.17, 44.51}, {-88.17, 44.47}}},
      {"REDCLIFF", "Red Cliff", 34,
       {{-90.85, 46.80}, {-90.72, 46.80}, {-90.72, 46.90}, {-90.85, 46.90}}, {}},
      {"STOCKBRIDGE", "Stockbridge-Munsee Community", 68,
       {{-89.10, 44.76}, {-88.99, 44.76}, {-88.99, 44.84}, {-89.10, 44.84}}, {}},
      {"FCP", "Forest County Potawatomi Community", 116,
       {{-88.90, 45.55}, {-88.70, 45.55}, {-88.75, 45.60}, {-88.70, 45.65}, {-88.90, 45.65}}, {}},
  };
  return shapes;
}

Ring closed(const std::vector<GeoPoint>& pts) {
  Ring r(pts.begin(), pts.end());
  r.push_back(pts.front());
  return r;
}

}  // namespace

std::vector<TribeBoundary> wisconsin_tribes() {
  std::vector<TribeBoundary> out;
  for (const auto& s : tribe_shapes()) {
    Polygon poly{closed(s.outer), {}};
    if (!s.hole.empty()) poly.holes.push_back(closed(s.hole));
    out.push_back({s.id, s.name, {std::move(poly)}});
  }
  return out;
}

std::vector<TribeWeight> wisconsin_tribe_weights() {
  std::vector<TribeWeight> out;
  for (const auto& s : tribe_shapes()) out.push_back({s.id, s.name, s.crashes});
  return out;
}

// ---------------------------------------------------------------------------
// generation

namespace {

double round6(double v) { return std::round(v * 1e6) / 1e6; }

GeoPoint rounded(GeoPoint p) { return {round6(p.lon), round6(p.lat)}; }

GeoPoint sample_inside(Rng& rng, const TribeBoundary& tribe) {
  const auto box = tribe.bbox();
  for (;;) {
    GeoPoint p = rounded({rng.uniform(box.min_lon, box.max_lon), rng.uniform(box.min_lat, box.max_lat)});
    if (boundary_contains(tribe, p)) return p;
  }
}

const TribeBoundary* containing(std::span<const TribeBoundary> tribes, GeoPoint p) {
  for (const auto& t : tribes) {
    if (boundary_contains(t, p)) return &t;
  }
  return nullptr;
}

GeoPoint sample_outside(Rng& rng, std::span<const TribeBoundary> tribes) {
  const auto& box = kWisconsinExtent;
  for (;;) {
    GeoPoint p = rounded({rng.uniform(box.min_lon, box.max_lon), rng.uniform(box.min_lat, box.max_lat)});
    if (!containing(tribes, p)) return p;
  }
}

Date random_date(Rng& rng, int year_from, int year_to) {
  using namespace std::chrono;
  const int year = year_from + static_cast<int>(rng.below(static_cast<std::uint64_t>(year_to - year_from + 1)));
  const sys_days first{std::chrono::year{year} / January / 1};
  const sys_days next{std::chrono::year{year + 1} / January / 1};
  const auto span = static_cast<std::uint64_t>((next - first).count());
  const year_month_day ymd{first + days{static_cast<int>(rng.below(span))}};
  return {static_cast<int>(ymd.year()), static_cast<int>(static_cast<unsigned>(ymd.month())),
          static_cast<int>(static_cast<unsigned>(ymd.day()))};
}

void apply_road_slot(Rng& rng, RoadSlot slot, CrashRecord& c) {
  static constexpr std::array<double, 3> kHighway = {0.50, 0.35, 0.15};  // STH, USH, IH
  static constexpr std::array<double, 2> kNonHighway = {0.35, 0.65};     // CTH, local
  const bool rural = slot == RoadSlot::rural_highway || slot == RoadSlot::rural_non_highway;
  const bool highway = slot == RoadSlot::rural_highway || slot == RoadSlot::urban_highway;
  if (slot == RoadSlot::unclassified) {
    c.urban_rural = UrbanRural::unknown;
    c.road_functional = RoadFunctional::unknown;
    return;
  }
  c.urban_rural = rural ? UrbanRural::rural : UrbanRural::urban;
  if (highway) {
    constexpr RoadFunctional kinds[] = {RoadFunctional::STH, RoadFunctional::USH, RoadFunctional::IH};
    c.road_functional = kinds[rng.categorical(kHighway)];
  } else {
    constexpr RoadFunctional kinds[] = {RoadFunctional::CTH, RoadFunctional::local};
    c.road_functional = kinds[rng.categorical(kNonHighway)];
  }
}

std::optional<int> age_in_slot(Rng& rng, std::size_t slot) {
  if (slot >= kAgeLo.size()) return std::nullopt;
  return kAgeLo[slot] + static_cast<int>(rng.below(static_cast<std::uint64_t>(kAgeHi[slot] - kAgeLo[slot] + 1)));
}

std::string crash_id_for(std::int64_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "SYN%08lld", static_cast<long long>(i + 1));
  return buf;
}

void mark_tribal(Rng& rng, const TribeBoundary& tribe, CrashRecord& c) {
  if (rng.bernoulli(0.9)) {
    c.tribal_code = tribe.tribe_id;
    c.tribal_name = tribe.name;
  }
  c.crash_location_class = rng.bernoulli(0.7) ? CrashLocationClass::tribal_land : CrashLocationClass::public_property;
  c.jurisdiction = rng.bernoulli(0.8) ? Jurisdiction::indian_reservation_trust : Jurisdiction::none;
  static constexpr std::array<double, 3> kAgency = {0.35, 0.40, 0.25};
  constexpr AgencyType agencies[] = {AgencyType::tribal, AgencyType::county_sheriff, AgencyType::state_patrol};
  c.agency_type = agencies[rng.categorical(kAgency)];
}

void mark_off_reservation(Rng& rng, CrashRecord& c) {
  c.crash_location_class = rng.bernoulli(0.92) ? CrashLocationClass::public_property
                                               : CrashLocationClass::private_property;
  c.jurisdiction = Jurisdiction::none;
  static constexpr std::array<double, 3> kAgency = {0.45, 0.35, 0.20};
  constexpr AgencyType agencies[] = {AgencyType::city_police, AgencyType::county_sheriff, AgencyType::state_patrol};
  c.agency_type = agencies[rng.categorical(kAgency)];
}

std::vector<double> crash_type_weights(const ScopeProfile& p) {
  std::vector<double> w;
  for (const auto& t : p.crash_types) w.push_back(t.second);
  return w;
}

}  // namespace

SynthDataset generate(const SynthSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  SynthDataset out;
  out.boundaries = wisconsin_tribes();
  const std::span<const TribeBoundary> tribes(out.boundaries);

  std::vector<double> tribe_weights;
  for (const auto& w : wisconsin_tribe_weights()) tribe_weights.push_back(w.weight);
  std::vector<double> cluster_weights;
  double cluster_total = 0.0;
  for (const auto& c : spec.clusters) {
    cluster_weights.push_back(c.intensity);
    cluster_total += c.intensity;
  }
  const auto tribal_types = crash_type_weights(spec.tribal);
  const auto statewide_types = crash_type_weights(spec.statewide);
  static constexpr std::array<double, 3> kPersonCount = {0.55, 0.30, 0.15};

  out.crashes.reserve(static_cast<std::size_t>(spec.n_crashes));
  for (std::int64_t i = 0; i < spec.n_crashes; ++i) {
    CrashRecord c;
    c.crash_id = crash_id_for(i);
    c.crash_date = random_date(rng, spec.year_from, spec.year_to);

    const TribeBoundary* tribe = nullptr;
    if (spec.lattice) {
      const auto& L = *spec.lattice;
      const auto cell = static_cast<std::int64_t>(i % (static_cast<std::int64_t>(L.side) * L.side));
      c.location = GeoPoint{L.origin_lon + (static_cast<double>(cell % L.side) + 0.5) * L.step,
                            L.origin_lat + (static_cast<double>(cell / L.side) + 0.5) * L.step};
      if (rng.bernoulli(spec.tribal_fraction)) tribe = &tribes[rng.categorical(tribe_weights)];
    } else if (cluster_total > 0.0 && rng.uniform() < cluster_total) {
      const auto& center = spec.clusters[rng.categorical(cluster_weights)];
      GeoPoint p{center.lon + center.spread * rng.normal(), center.lat + center.spread * rng.normal()};
      p = rounded(p);
      c.location = p;
      tribe = containing(tribes, p);
    } else if (rng.bernoulli(spec.tribal_fraction)) {
      tribe = &tribes[rng.categorical(tribe_weights)];
      c.location = sample_inside(rng, *tribe);
    } else {
      c.location = sample_outside(rng, tribes);
    }

    if (tribe) {
      mark_tribal(rng, *tribe, c);
    } else {
      mark_off_reservation(rng, c);
    }
    const ScopeProfile& profile = tribe ? spec.tribal : spec.statewide;

    const auto slot = static_cast<RoadSlot>(rng.categorical(profile.road));
    apply_road_slot(rng, slot, c);
    const SeverityMix& mix =
        profile.road_severity ? (*profile.road_severity)[static_cast<int>(slot)] : profile.severity;
    const auto severity = static_cast<Severity>(rng.categorical(mix));

    for (int k = 0; k < kKeyFactorCount; ++k) {
      const bool on = rng.bernoulli(profile.flags[k]);
      switch (static_cast<KeyFactor>(k)) {
        case KeyFactor::speeding: c.flags.speeding = on; break;
        case KeyFactor::impaired: c.flags.impaired = on; break;
        case KeyFactor::pedestrian: c.flags.pedestrian_involved = on; break;
        case KeyFactor::hit_and_run: c.flags.hit_and_run = on; break;
        case KeyFactor::safety_belt: c.flags.safety_belt = on; break;
      }
    }
    c.crash_type = profile.crash_types[rng.categorical(tribe ? tribal_types : statewide_types)].first;

    const auto n_persons = 1 + rng.categorical(kPersonCount);
    for (std::size_t p = 0; p < n_persons; ++p) {
      PersonRecord person;
      person.role = p == 0 ? PersonRole::driver
                           : (p == 1 && c.flags.pedestrian_involved ? PersonRole::pedestrian
                                                                    : PersonRole::passenger);
      person.sex = static_cast<Sex>(rng.categorical(profile.sex));
      person.age = age_in_slot(rng, rng.categorical(profile.age));
      person.injury = p == 0 ? severity
                             : static_cast<Severity>(rng.below(static_cast<std::uint64_t>(severity) + 1));
      c.persons.push_back(person);
    }
    c.severity = severity;
    out.crashes.push_back(std::move(c));
  }
  return out;
}

// ---------------------------------------------------------------------------
// published-marginals fixture

namespace {

// Severity classes used to deal the fixture: KA, B only, C or O.
enum Cls { kKA = 0, kB = 1, kCO = 2 };

// (total, KAB, KA) -> crashes per class.
std::array<int, 3> per_class(int total, int kab, int ka) { return {ka, kab - ka, total - kab}; }

// Expands per-category class counts into one shuffled label sequence per class.
std::array<std::vector<int>, 3> deal(Rng& rng, const std::vector<std::array<int, 3>>& categories) {
  std::array<std::vector<int>, 3> seq;
  for (int cls = 0; cls < 3; ++cls) {
    for (std::size_t cat = 0; cat < categories.size(); ++cat) {
      seq[cls].insert(seq[cls].end(), static_cast<std::size_t>(categories[cat][cls]), static_cast<int>(cat));
    }
    for (std::size_t i = seq[cls].size(); i > 1; --i) std::swap(seq[cls][i - 1], seq[cls][rng.below(i)]);
  }
  return seq;
}

}  // namespace

SynthDataset marginals_fixture(std::uint64_t seed) {
  Rng rng(seed);
  SynthDataset out;
  out.boundaries = wisconsin_tribes();

  const std::vector<std::array<int, 3>> tribes = {
      per_class(74, 16, 6),   per_class(202, 42, 18), per_class(29, 6, 4),  per_class(103, 20, 6),
      per_class(349, 58, 14), per_class(14, 2, 0),    per_class(130, 17, 5), per_class(2277, 287, 47),
      per_class(34, 4, 2),    per_class(68, 6, 4),    per_class(116, 7, 2)};
  const std::vector<std::array<int, 3>> roads = {per_class(543, 87, 27), per_class(1040, 153, 51),
                                                 per_class(817, 98, 10), per_class(996, 127, 20)};
  const std::vector<std::array<int, 3>> sexes = {per_class(1346, 170, 32), per_class(1865, 287, 71),
                                                 per_class(185, 8, 5)};
  // Standard bins; the 55-74 row is dealt into 65-74 and the 45-64 row is
  // aged 45-54 so both bin readings reproduce the table.
  const std::vector<std::array<int, 3>> ages = {
      per_class(0, 0, 0),     per_class(4, 2, 1),    per_class(756, 121, 24), per_class(1117, 184, 42),
      per_class(899, 98, 25), per_class(258, 31, 4), per_class(170, 21, 7),   per_class(192, 8, 5)};
  const std::vector<std::array<int, 3>> flags = {per_class(484, 108, 33), per_class(316, 133, 56),
                                                 per_class(32, 25, 12), per_class(336, 21, 9),
                                                 per_class(288, 66, 40)};

  const auto tribe_seq = deal(rng, tribes);
  const auto road_seq = deal(rng, roads);
  const auto sex_seq = deal(rng, sexes);
  const auto age_seq = deal(rng, ages);
  // Each flag is set on a shuffled subset of every class.
  std::array<std::array<std::vector<bool>, 3>, kKeyFactorCount> flag_on;
  for (int k = 0; k < kKeyFactorCount; ++k) {
    for (int cls = 0; cls < 3; ++cls) {
      auto& v = flag_on[k][cls];
      v.assign(tribe_seq[cls].size(), false);
      std::fill_n(v.begin(), flags[k][cls], true);
      for (std::size_t i = v.size(); i > 1; --i) {
        const auto j = rng.below(i);
        const bool tmp = v[i - 1];
        v[i - 1] = v[j];
        v[j] = tmp;
      }
    }
  }

  const auto profile = tribal_profile();
  const auto type_weights = crash_type_weights(profile);
  constexpr std::array<int, kAgeSlots - 1> kFixtureAgeHi = {4, 14, 24, 44, 54, 74, 95};

  for (int cls = 0; cls < 3; ++cls) {
    for (std::size_t j = 0; j < tribe_seq[cls].size(); ++j) {
      CrashRecord c;
      const auto& tribe = out.boundaries[static_cast<std::size_t>(tribe_seq[cls][j])];
      c.crash_date = {2017 + static_cast<int>(j % 5), 1 + static_cast<int>(j % 12), 1 + static_cast<int>(j % 28)};
      c.location = sample_inside(rng, tribe);
      c.tribal_code = tribe.tribe_id;
      c.tribal_name = tribe.name;
      c.crash_location_class = CrashLocationClass::tribal_land;
      c.jurisdiction = Jurisdiction::indian_reservation_trust;
      c.agency_type = AgencyType::tribal;
      apply_road_slot(rng, static_cast<RoadSlot>(road_seq[cls][j]), c);
      c.flags.speeding = flag_on[0][cls][j];
      c.flags.impaired = flag_on[1][cls][j];
      c.flags.pedestrian_involved = flag_on[2][cls][j];
      c.flags.hit_and_run = flag_on[3][cls][j];
      c.flags.safety_belt = flag_on[4][cls][j];
      c.crash_type = profile.crash_types[rng.categorical(type_weights)].first;

      Severity s = Severity::B;
      if (cls == kKA) s = j < 20 ? Severity::K : Severity::A;
      if (cls == kCO) s = j < 309 ? Severity::C : Severity::O;
      PersonRecord driver;
      driver.role = PersonRole::driver;
      driver.sex = static_cast<Sex>(sex_seq[cls][j]);
      const auto age_slot = static_cast<std::size_t>(age_seq[cls][j]);
      if (age_slot < kAgeLo.size()) {
        driver.age = kAgeLo[age_slot] +
                     static_cast<int>(rng.below(static_cast<std::uint64_t>(kFixtureAgeHi[age_slot] - kAgeLo[age_slot] + 1)));
      }
      driver.injury = s;
      c.persons.push_back(driver);
      c.severity = s;
      out.crashes.push_back(std::move(c));
    }
  }
  for (std::size_t i = out.crashes.size(); i > 1; --i) std::swap(out.crashes[i - 1], out.crashes[rng.below(i)]);
  for (std::size_t i = 0; i < out.crashes.size(); ++i) out.crashes[i].crash_id = crash_id_for(static_cast<std::int64_t>(i));
  return out;
}

// ---------------------------------------------------------------------------
// writers

namespace {

std::string coordinate(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

std::string crash_csv(std::span<const CrashRecord> crashes) {
  std::string out;
  append_csv_row(out, {"crash_id", "crash_date", "longitude", "latitude", "crshloc", "crshjur", "agcytype",
                       "trbcode", "trbname", "road_functional", "urban_rural", "crash_type",
                       "flag_speeding", "flag_impaired", "flag_pedestrian", "flag_hitrun", "flag_beltnonuse"});
  auto flag = [](bool b) { return std::string(b ? "1" : "0"); };
  for (const auto& c : crashes) {
    append_csv_row(out, std::vector<std::string>{
                            c.crash_id, format_iso_date(c.crash_date),
                            c.location ? coordinate(c.location->lon) : "",
                            c.location ? coordinate(c.location->lat) : "",
                            std::string(to_string(c.crash_location_class)), std::string(to_string(c.jurisdiction)),
                            std::string(to_string(c.agency_type)), c.tribal_code.value_or(""),
                            c.tribal_name.value_or(""), std::string(to_string(c.road_functional)),
                            std::string(to_string(c.urban_rural)), c.crash_type, flag(c.flags.speeding),
                            flag(c.flags.impaired), flag(c.flags.pedestrian_involved), flag(c.flags.hit_and_run),
                            flag(c.flags.safety_belt)});
  }
  return out;
}

std::string person_csv(std::span<const CrashRecord> crashes) {
  std::string out;
  append_csv_row(out, {"crash_id", "role", "sex", "age", "injury"});
  for (const auto& c : crashes) {
    for (const auto& p : c.persons) {
      append_csv_row(out, std::vector<std::string>{c.crash_id, std::string(to_string(p.role)),
                                                   std::string(to_string(p.sex)),
                                                   p.age ? std::to_string(*p.age) : "",
                                                   std::string(1, severity_code(p.injury))});
    }
  }
  return out;
}

SnapshotSources to_sources(const SynthDataset& data) {
  return {crash_csv(data.crashes), person_csv(data.crashes), boundaries_to_geojson(data.boundaries)};
}

}  // namespace crashdash::synth
