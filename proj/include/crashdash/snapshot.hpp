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
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crashdash/crash_record.hpp"
#include "crashdash/geometry.hpp"
#include "crashdash/ingest.hpp"
#include "crashdash/tribe_assignment.hpp"

namespace crashdash {

struct SnapshotSources {
  std::string crash_csv;
  std::string person_csv;
  std::string boundaries_geojson;  // empty: no tribal geometry
};

struct SnapshotInfo {
  std::string snapshot_id;
  std::string ingested_at;  // UTC, ISO 8601
  std::size_t record_count = 0;
  std::size_t tribal_count = 0;    // crashes with a resolved tribe
  std::size_t conflict_count = 0;  // attribute and geometry disagree
  // The three ways of counting tribal crashes, side by side.
  std::size_t attribute_count = 0;       // resolved through TRBCODE
  std::size_t spatial_count = 0;         // inside some boundary
  std::size_t crshloc_tribal_count = 0;  // CRSHLOC says Tribal Land
  std::size_t rejected_rows = 0;         // crash + person rejections
  std::string source_digest;             // crashes, persons and boundaries
};

/// Immutable, validated and tribe-resolved crash collection. Every query runs
/// against one of these; replacing data means building a new snapshot.
class DatasetSnapshot {
 public:
  struct BuildOptions {
    CsvSchema schema;
    // Restored identity when reloading a persisted snapshot.
    std::optional<std::string> snapshot_id;
    std::optional<std::string> ingested_at;
  };

  // Throws IngestError / BoundaryError on fatal input problems.
  static std::shared_ptr<const DatasetSnapshot> build(const SnapshotSources& sources,
                                                      const BuildOptions& options);
  static std::shared_ptr<const DatasetSnapshot> build(const SnapshotSources& sources);

  DatasetSnapshot(const DatasetSnapshot&) = delete;
  DatasetSnapshot& operator=(const DatasetSnapshot&) = delete;

  const std::vector<CrashRecord>& records() const { return records_; }
  const std::vector<TribeAssignment>& assignments() const { return assignments_; }
  std::span<const Severity> severities() const { return severities_; }
  std::span<const TribeBoundary> boundaries() const { return boundaries_; }
  const TribeResolver& resolver() const { return *resolver_; }
  const IngestReport& ingest_report() const { return report_; }
  const TribeDiagnostics& diagnostics() const { return diagnostics_; }
  const SnapshotInfo& info() const { return info_; }
  const std::string& id() const { return info_.snapshot_id; }

  const std::optional<std::string>& tribe_of(std::size_t i) const { return assignments_[i].tribe_id; }
  bool is_tribal(std::size_t i) const { return assignments_[i].tribe_id.has_value(); }

  // Display name for a tribe id (the boundary name), or the id itself.
  std::string tribe_name(const std::string& tribe_id) const;

 private:
  DatasetSnapshot() = default;

  std::vector<CrashRecord> records_;
  std::vector<Severity> severities_;
  std::vector<TribeBoundary> boundaries_;
  std::unique_ptr<TribeResolver> resolver_;
  std::vector<TribeAssignment> assignments_;
  IngestReport report_;
  TribeDiagnostics diagnostics_;
  SnapshotInfo info_;
};

std::string current_utc_timestamp();

// On-disk layout under a data directory:
//   sources/crashes.csv, sources/persons.csv, sources/boundaries.geojson
//   snapshot.json      identity, counts and digests
//   diagnostics.json   ingest rejections and tribe diagnostics
void save_snapshot(const std::filesystem::path& data_dir, const SnapshotSources& sources,
                   const DatasetSnapshot& snapshot);

// Rebuilds the persisted snapshot with its original id. Throws IngestError if
// there is none or the sources no longer match the recorded digest.
std::shared_ptr<const DatasetSnapshot> load_snapshot(const std::filesystem::path& data_dir);

bool has_snapshot(const std::filesystem::path& data_dir);

SnapshotSources read_sources(const std::filesystem::path& crash_csv,
                             const std::filesystem::path& person_csv,
                             const std::filesystem::path& boundaries);

}  // namespace crashdash
