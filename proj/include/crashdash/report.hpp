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

#include <string>

#include <json.hpp>

#include "crashdash/analytics.hpp"
#include "crashdash/ingest.hpp"
#include "crashdash/snapshot.hpp"
#include "crashdash/tribe_assignment.hpp"

// JSON and CSV emitters for every result type. JSON keeps full precision and
// a fixed key order; CSV rounds percentages for display (one decimal for
// summaries, breakdowns, road tables and crash types, two for rankings).
namespace crashdash {

using Json = nlohmann::ordered_json;

struct SummaryResult {
  Scope scope = Scope::statewide;
  std::optional<std::string> tribe_id;
  RateSummary summary;
  InjuryCounts injuries;

  friend bool operator==(const SummaryResult&, const SummaryResult&) = default;
};

SummaryResult summarize(const DatasetSnapshot& snapshot, Scope scope, const QueryFilter& filter);

Json to_json(const RateSummary& s);
Json to_json(const SummaryResult& r);
Json to_json(const CategoryBreakdown& b);
Json to_json(const RoadTable& t);
Json to_json(const TribeRanking& r);
Json to_json(const CrashTypeComparison& c);

// Inverses of the above; throw nlohmann::json::exception on shape errors.
RateSummary rate_summary_from_json(const Json& j);
SummaryResult summary_from_json(const Json& j);
CategoryBreakdown breakdown_from_json(const Json& j);
RoadTable road_table_from_json(const Json& j);
TribeRanking ranking_from_json(const Json& j);
CrashTypeComparison crash_types_from_json(const Json& j);

std::string to_csv(const SummaryResult& r);
std::string to_csv(const CategoryBreakdown& b);
std::string to_csv(const RoadTable& t);
std::string to_csv(const TribeRanking& r);
std::string to_csv(const CrashTypeComparison& c);

Json snapshot_info_to_json(const SnapshotInfo& info);
Json ingest_report_to_json(const IngestReport& report);
Json diagnostics_to_json(const IngestReport& report, const TribeDiagnostics& diagnostics);

}  // namespace crashdash
