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
#include <span>
#include <string_view>

namespace crashdash {

// KABCO injury severity. Underlying values follow the severity order, so the
// built-in comparison operators give K > A > B > C > O.
enum class Severity : std::uint8_t { O = 0, C = 1, B = 2, A = 3, K = 4 };

inline constexpr std::array<Severity, 5> kAllSeverities = {
    Severity::K, Severity::A, Severity::B, Severity::C, Severity::O};

enum class SeverityGroup : std::uint8_t { KA, KAB, ALL };

std::optional<Severity> parse_severity(std::string_view code);
char severity_code(Severity s);

std::optional<SeverityGroup> parse_severity_group(std::string_view text);
std::string_view severity_group_name(SeverityGroup g);

bool in_group(Severity s, SeverityGroup group);

struct PersonRecord;

/// Crash-level severity: the most severe person injury, or O when nobody was
/// recorded.
Severity derive_crash_severity(std::span<const PersonRecord> persons);

}  // namespace crashdash
