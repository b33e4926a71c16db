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

#include "crashdash/analytics.hpp"
#include "crashdash/error.hpp"
#include "crashdash/synth.hpp"
#include "crashdash/tribe_assignment.hpp"
#include "support/fixtures.hpp"

using namespace crashdash;
using namespace crashdash::synth;

TEST(Rng, Deterministic) {
  Rng a(5), b(5), c(6);
  for (int i = 0; i < 100; ++i) {
    auto x = a.uniform();
    EXPECT_EQ(x, b.uniform());
    EXPECT_GE(x, 0.0);
    EXPECT_LT(x, 1.0);
  }
  EXPECT_NE(Rng(5).uniform(), c.uniform());
}

TEST(Synth, SameSeedSameBytes) {
  auto s = fixtures::spec(9, 2000);
  auto a = generate(s);
  auto b = generate(s);
  EXPECT_EQ(crash_csv(a.crashes), crash_csv(b.crashes));
  EXPECT_EQ(person_csv(a.crashes), person_csv(b.crashes));
  s.seed = 10;
  EXPECT_NE(crash_csv(generate(s).crashes), crash_csv(a.crashes));
}

TEST(Synth, BadMixIsRejected) {
  auto s = SynthSpec::wisconsin();
  s.tribal.severity[0] += 0.01;
  try {
    s.validate();
    FAIL() << "expected InvalidArgument";
  } catch (const InvalidArgument& e) {
    EXPECT_EQ(e.param(), "tribal.severity");
  }
  EXPECT_THROW(generate(s), InvalidArgument);
  auto neg = SynthSpec::wisconsin();
  neg.n_crashes = -1;
  EXPECT_THROW(neg.validate(), InvalidArgument);
  auto frac = SynthSpec::wisconsin();
  frac.tribal_fraction = 1.5;
  EXPECT_THROW(frac.validate(), InvalidArgument);
}

TEST(Synth, TribalShareFollowsTheFraction) {
  auto data = generate(fixtures::spec(42, 100000, 0.005));
  TribeResolver resolver(data.boundaries);
  std::int64_t tribal = 0;
  for (const auto& c : data.crashes) tribal += resolver.assign(c).tribe_id.has_value();
  EXPECT_NEAR(static_cast<double>(tribal) / 100000.0, 0.005, 0.001);
}

TEST(Synth, TribalSeverityMixMatchesTheTarget) {
  auto data = generate(fixtures::spec(42, 100000, 0.25));
  TribeResolver resolver(data.boundaries);
  std::vector<CrashRecord> tribal;
  for (const auto& c : data.crashes) {
    if (resolver.assign(c).tribe_id) tribal.push_back(c);
  }
  auto s = rate_summary(tribal);
  EXPECT_NEAR(*s.kab_rate, 13.7, 0.5);
  EXPECT_NEAR(*s.ka_rate, 3.2, 0.5);
}

TEST(Synth, RecordsAreWellFormed) {
  auto data = generate(fixtures::spec(4, 3000));
  for (const auto& c : data.crashes) {
    ASSERT_TRUE(c.location);
    EXPECT_TRUE(kWisconsinExtent.contains(*c.location));
    EXPECT_GE(c.crash_date.year, 2017);
    EXPECT_LE(c.crash_date.year, 2021);
    ASSERT_FALSE(c.persons.empty());
    EXPECT_LE(c.persons.size(), 3u);
    EXPECT_EQ(derive_crash_severity(c.persons), c.severity);
  }
}

TEST(Synth, LatticePlacesOnePointPerCellCentre) {
  auto s = fixtures::spec(1, 50, 0.0);
  s.lattice = Lattice{-90.0, 44.0, 0.1, 5};
  auto data = generate(s);
  EXPECT_EQ(data.crashes[0].location, (GeoPoint{-89.95, 44.05}));
  EXPECT_EQ(data.crashes[26].location, data.crashes[1].location);
  EXPECT_EQ(s.lattice->bbox(), (BBox{-90.0, 44.0, -89.5, 44.5}));
}

TEST(Synth, SpecJsonRoundTrip) {
  auto s = fixtures::spec(77, 1234, 0.3);
  s.clusters.push_back({-89.0, 44.0, 0.1, 0.01});
  s.lattice = Lattice{-90.0, 44.0, 0.05, 4};
  auto j = spec_to_json(s);
  auto back = spec_from_json(j);
  EXPECT_EQ(spec_to_json(back), j);
  EXPECT_EQ(back.seed, 77u);
  EXPECT_EQ(back.n_crashes, 1234);

  auto partial = spec_from_json(nlohmann::ordered_json{{"seed", 3}});
  EXPECT_EQ(partial.seed, 3u);
  EXPECT_EQ(partial.n_crashes, SynthSpec::wisconsin().n_crashes);
}

TEST(Synth, ElevenTribesWithWeights) {
  auto tribes = wisconsin_tribes();
  auto weights = wisconsin_tribe_weights();
  ASSERT_EQ(tribes.size(), 11u);
  ASSERT_EQ(weights.size(), 11u);
  for (std::size_t i = 0; i < tribes.size(); ++i) EXPECT_EQ(tribes[i].tribe_id, weights[i].tribe_id);
}

TEST(Synth, MarginalsFixtureTotals) {
  auto data = marginals_fixture();
  EXPECT_EQ(data.crashes.size(), 3396u);
  auto s = rate_summary(data.crashes);
  EXPECT_EQ(s.kab, 465);
  EXPECT_EQ(s.ka, 108);
  auto other = marginals_fixture(2);
  EXPECT_EQ(rate_summary(other.crashes), s);
  EXPECT_NE(crash_csv(other.crashes), crash_csv(data.crashes));
}
