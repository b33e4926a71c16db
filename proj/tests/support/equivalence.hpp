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
#include <string>
#include <vector>

#include "crashdash/analytics.hpp"
#include "crashdash/snapshot.hpp"
#include "oracle.hpp"

namespace equivalence {

// A filter drawn at random from the values present in a synthetic snapshot.
crashdash::QueryFilter random_filter(std::uint64_t seed, const crashdash::DatasetSnapshot& snap);

// Compares every analytics query on `snap` against a brute-force recount of
// the same records. Returns one line per mismatch; empty means equivalent.
std::vector<std::string> compare(const crashdash::DatasetSnapshot& snap, const oracle::Recount& recount,
                                 const crashdash::QueryFilter& filter);

}  // namespace equivalence
