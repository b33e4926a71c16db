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

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace crashdash {

struct CsvRecord {
  std::vector<std::string> fields;
  // Set when the record's quoting is malformed; fields are then best-effort.
  std::optional<std::string> error;
};

// RFC 4180 record reader over an in-memory buffer. Accepts LF or CRLF line
// endings, quoted fields with embedded separators/newlines and doubled quotes,
// and skips a leading UTF-8 BOM and completely empty lines.
class CsvReader {
 public:
  explicit CsvReader(std::string_view data);

  // Returns false at end of input.
  bool next(CsvRecord& record);

 private:
  std::string_view data_;
  std::size_t pos_ = 0;
};

std::string csv_escape(std::string_view field);

// Appends one CSV line (terminated by '\n').
void append_csv_row(std::string& out, const std::vector<std::string>& fields);
void append_csv_row(std::string& out, std::initializer_list<std::string_view> fields);

}  // namespace crashdash
