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
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "crashdash/crash_record.hpp"
#include "crashdash/geometry.hpp"
#include "crashdash/snapshot.hpp"

// Seeded synthetic crash data. The random source is the 64-bit Mersenne
// Twister (MT19937-64) with hand-written conversions to doubles, categorical
// draws and normals, so a seed yields the same bytes on every platform.
namespace crashdash::synth {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // 53-bit uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Integer in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n);
  bool bernoulli(double p) { return uniform() < p; }
  // Index drawn with probability proportional to weights (non-negative, positive sum).
  std::size_t categorical(std::span<const double> weights);
  // Standard normal by the Box-Muller transform.
  double normal();

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

// Probabilities indexed by Severity value (O, C, B, A, K).
using SeverityMix = std::array<double, 5>;

enum class RoadSlot : std::uint8_t {
  rural_highway,
  rural_non_highway,
  urban_highway,
  urban_non_highway,
  unclassified
};
inline constexpr int kRoadSlots = 5;
using RoadMix = std::array<double, kRoadSlots>;

// Weights for the standard age bins followed by "Unknown".
inline constexpr int kAgeSlots = 8;

// Per-scope generation profile. "statewide" describes crashes off tribal land.
struct ScopeProfile {
  SeverityMix severity{};
  RoadMix road{};
  // When present, severity is drawn from the road slot's mix instead.
  std::optional<std::array<SeverityMix, kRoadSlots>> road_severity;
  std::array<double, 3> sex{};  // female, male, unknown
  std::array<double, kAgeSlots> age{};
  std::array<double, kKeyFactorCount> flags{};
  std::vector<std::pair<std::string, double>> crash_types;
};

// Extra crashes drawn around a centre. intensity is the probability that a
// crash belongs to this cluster; spread is the normal standard deviation in
// degrees. Cluster crashes take their tribe from the geometry.
struct ClusterCenter {
  double lon = 0.0;
  double lat = 0.0;
  double intensity = 0.0;
  double spread = 0.005;
};

// Regular layout: crash i sits at the centre of cell (i mod side^2) of a
// side x side lattice with the given origin and step.
struct Lattice {
  double origin_lon = 0.0;
  double origin_lat = 0.0;
  double step = 0.01;
  int side = 10;

  BBox bbox() const;
};

struct SynthSpec {
  std::uint64_t seed = 42;
  std::int64_t n_crashes = 10000;
  double tribal_fraction = 0.005;
  int year_from = 2017;
  int year_to = 2021;
  ScopeProfile tribal;
  ScopeProfile statewide;
  std::vector<ClusterCenter> clusters;
  std::optional<Lattice> lattice;

  /// Throws InvalidArgument naming the offending field. Severity and road
  /// mixes must each sum to 1 within 1e-9.
  void validate() const;

  // Profiles calibrated to the published Wisconsin tribal/statewide marginals.
  static SynthSpec wisconsin();
};

nlohmann::ordered_json spec_to_json(const SynthSpec& spec);
/// Starts from SynthSpec::wisconsin() and overrides the keys present.
SynthSpec spec_from_json(const nlohmann::ordered_json& j);

struct TribeWeight {
  std::string tribe_id;
  std::string name;
  double weight = 0.0;
};

// Eleven Wisconsin-like reservation polygons (some concave, one with a hole)
// and their crash weights.
std::vector<TribeBoundary> wisconsin_tribes();
std::vector<TribeWeight> wisconsin_tribe_weights();
inline constexpr BBox kWisconsinExtent{-92.9, 42.5, -86.8, 47.1};

struct SynthDataset {
  std::vector<CrashRecord> crashes;
  std::vector<TribeBoundary> boundaries;
};

SynthDataset generate(const SynthSpec& spec);

/// Deterministic all-tribal dataset whose tribal totals, KAB and KA counts
/// reproduce the published per-tribe table, the urban/rural by road class
/// table, and the sex, age and key-factor table at the same time. The seed
/// only moves points within each reservation.
SynthDataset marginals_fixture(std::uint64_t seed = 1);

std::string crash_csv(std::span<const CrashRecord> crashes);
std::string person_csv(std::span<const CrashRecord> crashes);
SnapshotSources to_sources(const SynthDataset& data);

}  // namespace crashdash::synth
