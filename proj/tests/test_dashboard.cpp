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

#include <httplib.h>

#include <set>
#include <thread>

#include "crashdash/dashboard.hpp"
#include "crashdash/error.hpp"
#include "crashdash/server.hpp"
#include "crashdash/synth.hpp"
#include "support/equivalence.hpp"
#include "support/fixtures.hpp"

using namespace crashdash;
using namespace crashdash::dashboard;

namespace {

const DatasetSnapshot& marginals() {
  static auto s = fixtures::build(synth::marginals_fixture());
  return *s;
}

const DatasetSnapshot& mixed() {
  static auto s = fixtures::build(synth::generate(fixtures::spec(17, 3000, 0.2)));
  return *s;
}

// Answers a refresh plan the way the browser would, from recorded bodies.
std::map<std::string, Json> record(const DatasetSnapshot& snap, const std::vector<Request>& plan) {
  std::map<std::string, Json> bodies;
  for (const auto& r : plan) {
    auto resp = api::handle_get(&snap, r.path, r.params);
    EXPECT_EQ(resp.status, 200) << r.path << " " << resp.body;
    bodies[r.panel] = Json::parse(resp.body);
  }
  return bodies;
}

}  // namespace

TEST(DashboardUrl, RoundTripIsLossless) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    DashboardState s;
    s.filter = equivalence::random_filter(seed, mixed());
    s.scope = seed % 3 == 0 ? Scope::statewide : Scope::tribal;
    if (s.filter.tribe_id && seed % 2) s.scope = Scope::single_tribe;
    s.layers = {seed % 4 != 1, seed % 4 != 2};
    const auto url = to_url_query(s);
    auto back = from_url_query(url);
    EXPECT_TRUE(same_state(s, back)) << url;
    EXPECT_EQ(to_url_query(back), url);
  }
}

TEST(DashboardUrl, AwkwardValuesSurvive) {
  DashboardState s;
  s.filter.crash_type = "Angle & Rear-End = 50% + more";
  s.filter.bbox = BBox{-91.45000000000001, 45.8, -91.15, 46.02};
  auto url = to_url_query(s);
  EXPECT_EQ(url.find(' '), std::string::npos);
  auto back = from_url_query("?" + url);
  EXPECT_EQ(*back.filter.crash_type, *s.filter.crash_type);
  EXPECT_EQ(*back.filter.bbox, *s.filter.bbox);
  EXPECT_EQ(to_url_query(DashboardState{}), "scope=tribal");
}

TEST(DashboardUrl, RejectsBadQueries) {
  auto param_of = [](const std::string& q) {
    try {
      from_url_query(q);
    } catch (const InvalidArgument& e) {
      return e.param();
    }
    return std::string("no error");
  };
  EXPECT_EQ(param_of("scope=tribal&colour=red"), "colour");
  EXPECT_EQ(param_of("scope=everywhere"), "scope");
  EXPECT_EQ(param_of("layers=heat"), "layers");
  EXPECT_EQ(param_of("year_from=2021&year_to=2017"), "year_from");
  EXPECT_EQ(param_of("scope=single_tribe"), "tribe_id");
  EXPECT_EQ(param_of("tribe_id=LCO&tribe_id=ONEIDA"), "tribe_id");
}

TEST(DashboardFilters, InvertedYearsStopBeforeAnyRequest) {
  DashboardState s;
  s.filter.year_from = 2021;
  s.filter.year_to = 2017;
  auto err = validate(s);
  ASSERT_TRUE(err);
  EXPECT_EQ(err->field, "year_from");
  s.filter.year_to = 2021;
  EXPECT_FALSE(validate(s));
}

TEST(DashboardFilters, SeverityGroupNarrowsEveryPanel) {
  DashboardState s;
  s.filter.severity_group = SeverityGroup::KAB;
  for (const auto& r : refresh_plan(s)) EXPECT_EQ(r.params.at("severity_group"), "KAB") << r.panel;
  auto bodies = record(marginals(), refresh_plan(s));
  auto cards = stat_cards(bodies["stats"]);
  EXPECT_EQ(cards.total_crashes, 465);
  std::int64_t ranked = 0;
  for (const auto& bar : ranking_histogram(bodies["rankings"])) ranked += bar.total;
  EXPECT_EQ(ranked, 465);
}

TEST(DashboardMap, ClickOnReservationSelectsTheTribe) {
  // A point inside Lac Courte Oreilles.
  auto id = tribe_at(marginals().boundaries(), {-91.3, 45.9});
  ASSERT_TRUE(id);
  EXPECT_EQ(*id, "LCO");
  EXPECT_FALSE(tribe_at(marginals().boundaries(), {-87.0, 43.0}));
  auto s = select_tribe(DashboardState{}, *id);
  EXPECT_EQ(s.scope, Scope::single_tribe);
  const auto plan = refresh_plan(s);
  std::set<std::string> panels;
  for (const auto& r : plan) {
    panels.insert(r.panel);
    EXPECT_EQ(r.params.at("tribe_id"), "LCO") << r.panel;
  }
  EXPECT_EQ(panels, (std::set<std::string>{"stats", "rankings", "crash_types", "points", "hotspots"}));
  auto bodies = record(marginals(), plan);
  EXPECT_EQ(stat_cards(bodies["stats"]).total_crashes, 202);
  auto bars = ranking_histogram(bodies["rankings"]);
  ASSERT_EQ(bars.size(), 1u);
  EXPECT_EQ(bars[0].tribe_id, "LCO");
  auto cleared = clear_tribe(s);
  EXPECT_EQ(cleared.scope, Scope::tribal);
  EXPECT_FALSE(cleared.filter.tribe_id);
}

TEST(DashboardMap, FiveSeveritiesFiveColours) {
  std::set<std::string_view> colours;
  for (auto sev : kAllSeverities) colours.insert(severity_color(sev));
  EXPECT_EQ(colours.size(), 5u);

  Json body = {{"snapshot_id", "x"}, {"features", Json::array()}};
  const char* codes[] = {"K", "A", "B", "C", "O"};
  for (int i = 0; i < 5; ++i) {
    body["features"].push_back({{"geometry", {{"coordinates", {-90.0 + i, 44.0}}}},
                                {"properties", {{"severity", codes[i]}, {"crash_id", std::to_string(i)}}}});
  }
  auto view = map_view(&body, nullptr, {});
  ASSERT_EQ(view.points.size(), 5u);
  std::set<std::string_view> drawn;
  for (const auto& p : view.points) drawn.insert(p.color);
  EXPECT_EQ(drawn.size(), 5u);
}

TEST(DashboardMap, HotspotToggleUsesHeldBodies) {
  DashboardState s;
  auto bodies = record(marginals(), refresh_plan(s));
  auto on = map_view(&bodies["points"], &bodies["hotspots"], s.layers);
  EXPECT_FALSE(on.cells.empty());
  EXPECT_EQ(on.points.size(), bodies["points"]["features"].size());
  auto off = map_view(&bodies["points"], &bodies["hotspots"], {true, false});
  EXPECT_TRUE(off.cells.empty());
  EXPECT_EQ(off.points.size(), on.points.size());
  EXPECT_EQ(on.cells.size(), bodies["hotspots"]["features"].size());
  for (std::size_t i = 0; i < on.cells.size(); ++i) {
    EXPECT_EQ(on.cells[i].label, bodies["hotspots"]["features"][i]["properties"]["label"]);
  }
}

TEST(DashboardMap, UnavailableApiShowsBannerOnly) {
  auto resp = api::handle_get(nullptr, "/api/v1/crashes", {});
  EXPECT_EQ(resp.status, 503);
  auto view = unavailable_map(Json::parse(resp.body)["message"]);
  ASSERT_TRUE(view.banner);
  EXPECT_TRUE(view.points.empty());
  EXPECT_TRUE(view.cells.empty());
}

// Every figure on the panels is a field of the recorded response.
TEST(DashboardPanels, FiguresEqualApiFields) {
  DashboardState s;
  auto bodies = record(marginals(), refresh_plan(s));
  const auto& sum = bodies["stats"];
  auto cards = stat_cards(sum);
  EXPECT_EQ(cards.total_crashes, sum["summary"]["total"]);
  EXPECT_EQ(cards.fatal_crashes, sum["injury_counts"]["K"]);
  EXPECT_EQ(cards.injury_crashes, sum["injury_counts"]["A"].get<std::int64_t>() +
                                      sum["injury_counts"]["B"].get<std::int64_t>() +
                                      sum["injury_counts"]["C"].get<std::int64_t>());
  EXPECT_EQ(*cards.kab_rate, sum["summary"]["kab_rate"].get<double>());
  EXPECT_EQ(*cards.ka_rate, sum["summary"]["ka_rate"].get<double>());
  EXPECT_FALSE(cards.no_data);

  auto bars = ranking_histogram(bodies["rankings"]);
  ASSERT_EQ(bars.size(), 11u);
  EXPECT_EQ(bars[0].tribe_id, "MENOMINEE");
  for (std::size_t i = 0; i < bars.size(); ++i) {
    const auto& row = bodies["rankings"]["rows"][i];
    EXPECT_EQ(bars[i].kab_rank, row["kab_rank"]);
    EXPECT_EQ(*bars[i].kab_rate, row["summary"]["kab_rate"].get<double>());
    EXPECT_EQ(bars[i].total, row["summary"]["total"]);
  }

  auto pairs = crash_type_chart(bodies["crash_types"]);
  ASSERT_EQ(pairs.size(), bodies["crash_types"]["rows"].size());
  ASSERT_LE(pairs.size(), 10u);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& row = bodies["crash_types"]["rows"][i];
    EXPECT_EQ(pairs[i].label, row["label"]);
    EXPECT_EQ(pairs[i].tribal_percent, row["tribal_percent"].get<double>());
    EXPECT_EQ(pairs[i].statewide_percent, row["statewide_percent"].get<double>());
  }
}

TEST(DashboardPanels, EmptyResultShowsZerosAndUndefinedRates) {
  DashboardState s;
  s.filter.bbox = BBox{0, 0, 1, 1};
  auto bodies = record(marginals(), refresh_plan(s));
  auto cards = stat_cards(bodies["stats"]);
  EXPECT_TRUE(cards.no_data);
  EXPECT_EQ(cards.total_crashes, 0);
  EXPECT_EQ(cards.fatal_crashes, 0);
  EXPECT_FALSE(cards.kab_rate);
  EXPECT_FALSE(cards.ka_rate);
  EXPECT_TRUE(ranking_histogram(bodies["rankings"]).empty());
}

TEST(DashboardRefresh, StaleAndMixedResponsesAreNotShown) {
  DashboardState s;
  const auto plan = refresh_plan(s);
  auto bodies = record(marginals(), plan);
  Refresh r(2, plan);
  EXPECT_FALSE(r.accept(1, "stats", bodies["stats"]));
  EXPECT_FALSE(r.accept(2, "nonsense", bodies["stats"]));
  for (const auto& req : plan) {
    EXPECT_FALSE(r.complete());
    EXPECT_TRUE(r.accept(2, req.panel, bodies[req.panel]));
  }
  EXPECT_TRUE(r.complete());
  EXPECT_EQ(r.snapshot_id(), marginals().id());

  auto other = bodies["rankings"];
  other["snapshot_id"] = "different";
  EXPECT_TRUE(r.accept(2, "rankings", other));
  EXPECT_FALSE(r.consistent());
  EXPECT_FALSE(r.complete());
  EXPECT_FALSE(r.snapshot_id());

  s.snapshot_id = marginals().id();
  EXPECT_FALSE(snapshot_changed(s, bodies["stats"]));
  EXPECT_TRUE(snapshot_changed(s, other));
}

// A refresh against a running server sees the fixture's numbers.
TEST(DashboardEndToEnd, FixtureBackedServer) {
  fixtures::TempDir dir;
  ServiceConfig config;
  config.listen_addr = "127.0.0.1:0";
  config.data_dir = dir / "data";
  auto store = std::make_shared<SnapshotStore>();
  store->publish(fixtures::build(synth::marginals_fixture()));
  Server server(config, store);
  ASSERT_TRUE(server.bind());
  std::thread t([&] { server.run(); });
  for (int i = 0; i < 500 && !server.running(); ++i) std::this_thread::sleep_for(std::chrono::milliseconds(5));

  // State restored from a pasted URL, then a click on the LCO outline.
  auto state = from_url_query(to_url_query(DashboardState{}));
  state = select_tribe(state, *tribe_at(store->current().snapshot->boundaries(), {-91.3, 45.9}));
  httplib::Client cl("127.0.0.1", server.port());
  Refresh refresh(1, refresh_plan(state));
  for (const auto& req : refresh_plan(state)) {
    auto resp = cl.Get(req.path, httplib::Params(req.params.begin(), req.params.end()), httplib::Headers{});
    ASSERT_TRUE(resp);
    ASSERT_EQ(resp->status, 200) << req.path << " " << resp->body;
    refresh.accept(1, req.panel, Json::parse(resp->body));
  }
  server.stop();
  t.join();
  ASSERT_TRUE(refresh.complete());
  auto cards = stat_cards(*refresh.body("stats"));
  EXPECT_EQ(cards.total_crashes, 202);
  EXPECT_EQ(*cards.kab_rate, 100.0 * 42 / 202);
  auto view = map_view(refresh.body("points"), refresh.body("hotspots"), state.layers);
  EXPECT_EQ(view.points.size(), 202u);
}
