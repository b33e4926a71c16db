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

#include "crashdash/tribe_assignment.hpp"

#include "crashdash/text.hpp"

namespace crashdash {

std::string_view to_string(AssignmentSource s) {
  switch (s) {
    case AssignmentSource::attribute: return "attribute";
    case AssignmentSource::spatial: return "spatial";
    case AssignmentSource::both_agree: return "both_agree";
    case AssignmentSource::conflict: return "conflict";
    case AssignmentSource::unresolved: return "unresolved";
  }
  return "unresolved";
}

TribeResolver::TribeResolver(std::span<const TribeBoundary> boundaries) : boundaries_(boundaries) {
  boxes_.reserve(boundaries.size());
  for (std::size_t i = 0; i < boundaries.size(); ++i) {
    boxes_.push_back(boundaries[i].bbox());
    by_id_.emplace(text::to_lower(boundaries[i].tribe_id), i);
  }
}

const TribeBoundary* TribeResolver::find(std::string_view tribe_id) const {
  auto it = by_id_.find(text::to_lower(text::trim(tribe_id)));
  return it == by_id_.end() ? nullptr : &boundaries_[it->second];
}

std::vector<std::size_t> TribeResolver::containing(GeoPoint p) const {
  std::vector<std::size_t> hits;
  for (std::size_t i = 0; i < boundaries_.size(); ++i) {
    if (boxes_[i].contains(p) && boundary_contains(boundaries_[i], p)) hits.push_back(i);
  }
  return hits;
}

TribeAssignment TribeResolver::assign(const CrashRecord& record,
                                      TribeDiagnostics* diagnostics) const {
  TribeAssignment out;
  out.crash_id = record.crash_id;

  const TribeBoundary* by_attribute = nullptr;
  if (record.tribal_code) {
    by_attribute = find(*record.tribal_code);
    if (!by_attribute && diagnostics) {
      diagnostics->unknown_codes.push_back({record.crash_id, *record.tribal_code});
    }
  }

  const TribeBoundary* by_location = nullptr;
  if (record.location) {
    auto hits = containing(*record.location);
    if (!hits.empty()) {
      by_location = &boundaries_[hits.front()];
      if (hits.size() > 1 && diagnostics) {
        TribeDiagnostics::Overlap overlap{record.crash_id, {}};
        for (auto i : hits) overlap.tribe_ids.push_back(boundaries_[i].tribe_id);
        diagnostics->overlaps.push_back(std::move(overlap));
      }
    }
  }

  if (by_attribute && by_location) {
    out.tribe_id = by_attribute->tribe_id;
    if (by_attribute == by_location) {
      out.source = AssignmentSource::both_agree;
    } else {
      out.source = AssignmentSource::conflict;
      out.conflict_detail = {by_attribute->tribe_id, by_location->tribe_id};
      if (diagnostics) {
        diagnostics->conflicts.push_back(
            {record.crash_id, by_attribute->tribe_id, by_location->tribe_id});
      }
    }
  } else if (by_attribute) {
    out.tribe_id = by_attribute->tribe_id;
    out.source = AssignmentSource::attribute;
  } else if (by_location) {
    out.tribe_id = by_location->tribe_id;
    out.source = AssignmentSource::spatial;
  }
  return out;
}

TribeAssignment assign_tribe(const CrashRecord& record, std::span<const TribeBoundary> boundaries) {
  return TribeResolver(boundaries).assign(record);
}

}  // namespace crashdash
