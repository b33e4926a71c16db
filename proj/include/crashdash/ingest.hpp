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
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crashdash/crash_record.hpp"

namespace crashdash {

// Logical field -> CSV column name. Defaults are the documented header names.
struct CsvSchema {
  // crash file
  std::string crash_id = "crash_id";
  std::string crash_date = "crash_date";
  std::string longitude = "longitude";
  std::string latitude = "latitude";
  std::string crshloc = "crshloc";
  std::string crshjur = "crshjur";
  std::string agcytype = "agcytype";
  std::string trbcode = "trbcode";
  std::string trbname = "trbname";
  std::string road_functional = "road_functional";
  std::string urban_rural = "urban_rural";
  std::string crash_type = "crash_type";
  std::string flag_speeding = "flag_speeding";
  std::string flag_impaired = "flag_impaired";
  std::string flag_pedestrian = "flag_pedestrian";
  std::string flag_hitrun = "flag_hitrun";
  std::string flag_beltnonuse = "flag_beltnonuse";
  // person file
  std::string person_crash_id = "crash_id";
  std::string role = "role";
  std::string sex = "sex";
  std::string age = "age";
  std::string injury = "injury";

  // Remaps logical fields; throws InvalidArgument for an unknown logical name.
  void apply_overrides(const std::map<std::string, std::string>& overrides);
};

struct RowRejection {
  std::size_t row_number = 0;  // 1-based data row (header excluded)
  std::string field;
  std::string message;

  friend bool operator==(const RowRejection&, const RowRejection&) = default;
};

struct FileReport {
  std::size_t data_rows = 0;
  std::size_t accepted_count = 0;
  std::vector<RowRejection> rejected;  // at most one entry per rejected row
  std::string digest;

  friend bool operator==(const FileReport&, const FileReport&) = default;
};

struct IngestReport {
  FileReport crashes;
  FileReport persons;
  std::string source_digest;  // over both inputs

  std::size_t accepted_count() const { return crashes.accepted_count; }
  bool has_rejections() const { return !crashes.rejected.empty() || !persons.rejected.empty(); }

  friend bool operator==(const IngestReport&, const IngestReport&) = default;
};

struct IngestResult {
  std::vector<CrashRecord> records;
  IngestReport report;
};

/// Parses the crash file and (optionally empty) person file. Person rows are
/// joined to accepted crashes by crash id and each crash's severity is rolled
/// up from its persons. Per-row problems are rejections; a missing header or
/// missing required column throws IngestError.
IngestResult parse_crash_csv(std::string_view crash_csv, std::string_view person_csv,
                             const CsvSchema& schema = {});

// Whole-file read; throws IngestError when the file cannot be opened.
std::string read_file(const std::filesystem::path& path);

}  // namespace crashdash
