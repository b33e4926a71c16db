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

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "crashdash/crash_record.hpp"
#include "crashdash/geometry.hpp"

namespace crashdash {

enum class AssignmentSource : std::uint8_t { attribute, spatial, both_agree, conflict, unresolved };

std::string_view to_string(AssignmentSource s);

// The derived tribal-membership field, independent of CRSHLOC/CRSHJUR.
struct TribeAssignment {
  std::string crash_id;
  std::optional<std::string> tribe_id;
  AssignmentSource source = AssignmentSource::unresolved;
  // (attribute tribe, spatial tribe); present iff source == conflict.
  std::optional<std::pair<std::string, std::string>> conflict_detail;
};

struct TribeDiagnostics {
  struct UnknownCode {
    std::string crash_id;
    std::string tribal_code;
  };
  struct Overlap {
    std::string crash_id;
    std::vector<std::string> tribe_ids;  // file order; the first one won
  };
  struct Conflict {
    std::string crash_id;
    std::string attribute_tribe;
    std::string spatial_tribe;
  };
  std::vector<UnknownCode> unknown_codes;
  std::vector<Overlap> overlaps;
  std::vector<Conflict> conflicts;
};

/// Reconciles a crash's officer-entered tribal code with the boundary that
/// contains its location. The attribute path wins a disagreement, which is
/// reported as a conflict.
class TribeResolver {
 public:
  explicit TribeResolver(std::span<const TribeBoundary> boundaries);

  TribeAssignment assign(const CrashRecord& record, TribeDiagnostics* diagnostics = nullptr) const;

  // Case-insensitive lookup of a tribe_id.
  const TribeBoundary* find(std::string_view tribe_id) const;

  // Indices of all boundaries containing p, in file order.
  std::vector<std::size_t> containing(GeoPoint p) const;

 private:
  std::span<const TribeBoundary> boundaries_;
  std::vector<BBox> boxes_;
  std::unordered_map<std::string, std::size_t> by_id_;  // lowercased id
};

TribeAssignment assign_tribe(const CrashRecord& record, std::span<const TribeBoundary> boundaries);

}  // namespace crashdash
