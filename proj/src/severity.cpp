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

#include "crashdash/severity.hpp"

#include <algorithm>

#include "crashdash/crash_record.hpp"
#include "crashdash/text.hpp"

namespace crashdash {

std::optional<Severity> parse_severity(std::string_view code) {
  code = text::trim(code);
  if (code.size() != 1) return std::nullopt;
  switch (code.front()) {
    case 'K': case 'k': return Severity::K;
    case 'A': case 'a': return Severity::A;
    case 'B': case 'b': return Severity::B;
    case 'C': case 'c': return Severity::C;
    case 'O': case 'o': return Severity::O;
    default: return std::nullopt;
  }
}

char severity_code(Severity s) {
  switch (s) {
    case Severity::K: return 'K';
    case Severity::A: return 'A';
    case Severity::B: return 'B';
    case Severity::C: return 'C';
    case Severity::O: return 'O';
  }
  return 'O';
}

std::optional<SeverityGroup> parse_severity_group(std::string_view t) {
  t = text::trim(t);
  if (text::iequals(t, "KA")) return SeverityGroup::KA;
  if (text::iequals(t, "KAB")) return SeverityGroup::KAB;
  if (text::iequals(t, "ALL")) return SeverityGroup::ALL;
  return std::nullopt;
}

std::string_view severity_group_name(SeverityGroup g) {
  switch (g) {
    case SeverityGroup::KA: return "KA";
    case SeverityGroup::KAB: return "KAB";
    case SeverityGroup::ALL: return "ALL";
  }
  return "ALL";
}

bool in_group(Severity s, SeverityGroup group) {
  switch (group) {
    case SeverityGroup::KA: return s >= Severity::A;
    case SeverityGroup::KAB: return s >= Severity::B;
    case SeverityGroup::ALL: return true;
  }
  return false;
}

Severity derive_crash_severity(std::span<const PersonRecord> persons) {
  Severity worst = Severity::O;
  for (const auto& p : persons) worst = std::max(worst, p.injury);
  return worst;
}

}  // namespace crashdash
