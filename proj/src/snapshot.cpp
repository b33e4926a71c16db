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

#include "crashdash/snapshot.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>

#include <json.hpp>

#include "crashdash/digest.hpp"
#include "crashdash/error.hpp"
#include "crashdash/report.hpp"

namespace crashdash {

namespace fs = std::filesystem;

namespace {

std::atomic<std::uint64_t> g_build_counter{0};

std::string make_snapshot_id(const std::string& digest, const std::string& ingested_at) {
  auto seq = g_build_counter.fetch_add(1);
  return sha256_hex(digest + "|" + ingested_at + "|" + std::to_string(seq)).substr(0, 16);
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IngestError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw IngestError("cannot write '" + path.string() + "'");
}

}  // namespace

std::string current_utc_timestamp() {
  auto now = std::chrono::system_clock::now();
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count();
  std::time_t secs = static_cast<std::time_t>(ms / 1000);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[96];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec,
                static_cast<int>(ms % 1000));
  return buf;
}

std::shared_ptr<const DatasetSnapshot> DatasetSnapshot::build(const SnapshotSources& sources) {
  return build(sources, BuildOptions{});
}

std::shared_ptr<const DatasetSnapshot> DatasetSnapshot::build(const SnapshotSources& sources,
                                                              const BuildOptions& options) {
  std::shared_ptr<DatasetSnapshot> snap(new DatasetSnapshot());
  auto ingested = parse_crash_csv(sources.crash_csv, sources.person_csv, options.schema);
  snap->records_ = std::move(ingested.records);
  snap->report_ = std::move(ingested.report);
  if (!sources.boundaries_geojson.empty()) {
    snap->boundaries_ = load_boundaries(sources.boundaries_geojson);
  }
  snap->resolver_ = std::make_unique<TribeResolver>(snap->boundaries_);

  auto& info = snap->info_;
  snap->severities_.reserve(snap->records_.size());
  snap->assignments_.reserve(snap->records_.size());
  for (const auto& record : snap->records_) {
    snap->severities_.push_back(record.severity);
    auto a = snap->resolver_->assign(record, &snap->diagnostics_);
    if (a.tribe_id) ++info.tribal_count;
    switch (a.source) {
      case AssignmentSource::attribute: ++info.attribute_count; break;
      case AssignmentSource::spatial: ++info.spatial_count; break;
      case AssignmentSource::both_agree:
      case AssignmentSource::conflict:
        ++info.attribute_count;
        ++info.spatial_count;
        break;
      case AssignmentSource::unresolved: break;
    }
    if (a.source == AssignmentSource::conflict) ++info.conflict_count;
    if (record.crash_location_class == CrashLocationClass::tribal_land) ++info.crshloc_tribal_count;
    snap->assignments_.push_back(std::move(a));
  }

  info.record_count = snap->records_.size();
  info.rejected_rows = snap->report_.crashes.rejected.size() + snap->report_.persons.rejected.size();
  info.source_digest = sha256_hex(snap->report_.source_digest +
                                  "\nboundaries:" + sha256_hex(sources.boundaries_geojson) + "\n");
  info.ingested_at = options.ingested_at.value_or(current_utc_timestamp());
  info.snapshot_id = options.snapshot_id.value_or(make_snapshot_id(info.source_digest, info.ingested_at));
  return snap;
}

std::string DatasetSnapshot::tribe_name(const std::string& tribe_id) const {
  if (const auto* b = resolver_->find(tribe_id)) return b->name;
  return tribe_id;
}

SnapshotSources read_sources(const fs::path& crash_csv, const fs::path& person_csv,
                             const fs::path& boundaries) {
  SnapshotSources s;
  s.crash_csv = read_file(crash_csv);
  if (!person_csv.empty()) s.person_csv = read_file(person_csv);
  if (!boundaries.empty()) s.boundaries_geojson = read_file(boundaries);
  return s;
}

void save_snapshot(const fs::path& data_dir, const SnapshotSources& sources,
                   const DatasetSnapshot& snapshot) {
  std::error_code ec;
  fs::create_directories(data_dir / "sources", ec);
  if (ec) throw IngestError("cannot create '" + (data_dir / "sources").string() + "'");
  write_text(data_dir / "sources" / "crashes.csv", sources.crash_csv);
  write_text(data_dir / "sources" / "persons.csv", sources.person_csv);
  write_text(data_dir / "sources" / "boundaries.geojson", sources.boundaries_geojson);
  write_text(data_dir / "diagnostics.json",
             diagnostics_to_json(snapshot.ingest_report(), snapshot.diagnostics()).dump(2) + "\n");
  // Manifest last: its presence marks a complete snapshot.
  write_text(data_dir / "snapshot.json", snapshot_info_to_json(snapshot.info()).dump(2) + "\n");
}

bool has_snapshot(const fs::path& data_dir) { return fs::exists(data_dir / "snapshot.json"); }

std::shared_ptr<const DatasetSnapshot> load_snapshot(const fs::path& data_dir) {
  if (!has_snapshot(data_dir)) {
    throw IngestError("no snapshot in '" + data_dir.string() + "'; run `crashdash ingest` first");
  }
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(read_file(data_dir / "snapshot.json"));
  } catch (const nlohmann::json::exception& e) {
    throw IngestError(std::string("corrupt snapshot manifest: ") + e.what());
  }
  SnapshotSources sources;
  sources.crash_csv = read_file(data_dir / "sources" / "crashes.csv");
  sources.person_csv = read_file(data_dir / "sources" / "persons.csv");
  sources.boundaries_geojson = read_file(data_dir / "sources" / "boundaries.geojson");

  DatasetSnapshot::BuildOptions options;
  options.snapshot_id = manifest.value("snapshot_id", "");
  options.ingested_at = manifest.value("ingested_at", "");
  auto snap = DatasetSnapshot::build(sources, options);
  if (snap->info().source_digest != manifest.value("source_digest", "")) {
    throw IngestError("snapshot sources in '" + data_dir.string() + "' do not match the manifest digest");
  }
  return snap;
}

}  // namespace crashdash
