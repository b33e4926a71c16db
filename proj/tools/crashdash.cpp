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

// crashdash: ingest crash extracts, print reports, run hotspot analysis,
// generate synthetic data and serve the HTTP API.

#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "crashdash/api.hpp"
#include "crashdash/config.hpp"
#include "crashdash/error.hpp"
#include "crashdash/hotspot.hpp"
#include "crashdash/ingest.hpp"
#include "crashdash/report.hpp"
#include "crashdash/server.hpp"
#include "crashdash/snapshot.hpp"
#include "crashdash/synth.hpp"
#include "crashdash/text.hpp"

namespace fs = std::filesystem;
using namespace crashdash;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPartial = 1;
constexpr int kExitFatal = 2;

struct Globals {
  std::string data_dir;
  std::string config_path;
};

struct IngestArgs {
  std::string crashes;
  std::string persons;
  std::string boundaries;
  std::string schema;
};

// Query options shared by report and hotspots; only flags the user set
// become parameters.
struct QueryArgs {
  std::map<std::string, std::string> values;

  void add(CLI::App* cmd, const std::string& flag, const std::string& param, const std::string& help) {
    cmd->add_option_function<std::string>(
        "--" + flag, [this, param](const std::string& v) { values[param] = v; }, help);
  }

  api::Params params() const { return {values.begin(), values.end()}; }
};

void add_filter_options(CLI::App* cmd, QueryArgs& q) {
  q.add(cmd, "scope", "scope", "statewide | tribal | single_tribe");
  q.add(cmd, "tribe-id", "tribe_id", "restrict to one tribe");
  q.add(cmd, "year-from", "year_from", "first crash year");
  q.add(cmd, "year-to", "year_to", "last crash year");
  q.add(cmd, "severity-group", "severity_group", "KA | KAB | ALL");
  q.add(cmd, "urban-rural", "urban_rural", "urban | rural");
  q.add(cmd, "highway-class", "highway_class", "highway | non_highway");
  q.add(cmd, "key-factor", "key_factor", "speeding | impaired | pedestrian | hit_and_run | safety_belt");
  q.add(cmd, "bbox", "bbox", "min_lon,min_lat,max_lon,max_lat");
  q.add(cmd, "crash-type", "crash_type", "crash type label");
}

ServiceConfig resolve_config(const Globals& g) {
  std::optional<fs::path> file;
  if (!g.config_path.empty()) file = g.config_path;
  auto config = load_config(file);
  if (!g.data_dir.empty()) config.data_dir = g.data_dir;
  return config;
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

void emit(const std::string& text) {
  std::fwrite(text.data(), 1, text.size(), stdout);
  std::fflush(stdout);
}

std::shared_ptr<const DatasetSnapshot> open_snapshot(const ServiceConfig& config) {
  if (!has_snapshot(config.data_dir)) {
    throw IngestError("no snapshot in " + config.data_dir.string() + "; run `crashdash ingest` first");
  }
  return load_snapshot(config.data_dir);
}

// ---------------------------------------------------------------------------

int cmd_ingest(const Globals& g, const IngestArgs& a) {
  const auto config = resolve_config(g);
  DatasetSnapshot::BuildOptions options;
  if (!a.schema.empty()) {
    const auto j = nlohmann::json::parse(read_file(a.schema));
    options.schema.apply_overrides(j.get<std::map<std::string, std::string>>());
  }
  const auto sources = read_sources(a.crashes, a.persons, a.boundaries);
  const auto snapshot = DatasetSnapshot::build(sources, options);
  save_snapshot(config.data_dir, sources, *snapshot);

  emit(ingest_report_to_json(snapshot->ingest_report()).dump(2) + "\n");
  const auto& info = snapshot->info();
  std::fprintf(stderr, "snapshot %s: %lld crashes (%lld tribal, %lld conflicts), %lld rows rejected -> %s\n",
               info.snapshot_id.c_str(), static_cast<long long>(info.record_count),
               static_cast<long long>(info.tribal_count), static_cast<long long>(info.conflict_count),
               static_cast<long long>(info.rejected_rows), config.data_dir.string().c_str());
  return info.rejected_rows > 0 ? kExitPartial : kExitOk;
}

int cmd_report(const Globals& g, const std::string& kind, const std::string& format, const QueryArgs& q) {
  const auto config = resolve_config(g);
  const auto snapshot = open_snapshot(config);
  const auto& s = *snapshot;
  const auto params = q.params();
  const bool json = format == "json";
  std::string out;
  if (kind == "summary") {
    const auto r = api::parse_summary(params);
    out = json ? api::summary_body(s, r) : to_csv(summarize(s, r.scope, r.filter));
  } else if (kind == "breakdown") {
    const auto r = api::parse_breakdown(params);
    out = json ? api::breakdown_body(s, r) : to_csv(breakdown(s, r.dimension, r.scope, r.filter, r.options));
  } else if (kind == "road") {
    const auto r = api::parse_road(params);
    out = json ? api::road_body(s, r) : to_csv(road_table(s, r.scope, r.filter));
  } else if (kind == "rankings") {
    const auto r = api::parse_rankings(params);
    out = json ? api::rankings_body(s, r) : to_csv(tribe_rankings(s, r.filter));
  } else {
    const auto r = api::parse_crash_types(params);
    out = json ? api::crash_types_body(s, r) : to_csv(top_crash_types(s, r.n, r.weight, r.filter));
  }
  emit(out);
  return kExitOk;
}

int cmd_hotspots(const Globals& g, const QueryArgs& q, const std::string& out_path, const std::string& csv_path) {
  const auto config = resolve_config(g);
  const auto snapshot = open_snapshot(config);
  const auto r = api::parse_hotspots(q.params(), api::Options::from(config));
  const auto result = compute_hotspots(*snapshot, r.scope, r.filter, r.params);
  for (const auto& w : result.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  const auto geojson = hotspots_geojson(result, r.cells) + "\n";
  if (out_path.empty() || out_path == "-") {
    emit(geojson);
  } else {
    write_file(out_path, geojson);
  }
  if (!csv_path.empty()) write_file(csv_path, hotspots_csv(result, r.cells));
  std::size_t hot = 0;
  std::size_t cold = 0;
  for (const auto& c : result.cells) {
    if (c.label == HotspotLabel::hot90 || c.label == HotspotLabel::hot95 || c.label == HotspotLabel::hot99) ++hot;
    if (c.label == HotspotLabel::cold90 || c.label == HotspotLabel::cold95 || c.label == HotspotLabel::cold99) ++cold;
  }
  std::fprintf(stderr, "grid %dx%d, %zu hot cells, %zu cold cells\n", result.grid.ncols, result.grid.nrows, hot, cold);
  return kExitOk;
}

struct SynthArgs {
  std::string spec_path;
  std::string preset = "wisconsin";
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> n;
  std::optional<double> tribal_fraction;
  std::vector<std::string> clusters;
  std::string lattice;
  std::string out_dir = ".";
  bool print_spec = false;
};

std::vector<double> numbers(const std::string& text, const std::string& param, std::size_t min, std::size_t max) {
  std::vector<double> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = text.find(',', start);
    auto d = text::parse_double(std::string_view(text).substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (!d) throw InvalidArgument(param, "expected comma-separated numbers");
    out.push_back(*d);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.size() < min || out.size() > max) throw InvalidArgument(param, "wrong number of values");
  return out;
}

int cmd_synth(const SynthArgs& a) {
  const fs::path dir = a.out_dir;
  synth::SynthDataset data;
  if (a.preset == "marginals") {
    data = synth::marginals_fixture(a.seed.value_or(1));
  } else {
    synth::SynthSpec spec = a.spec_path.empty()
                                ? synth::SynthSpec::wisconsin()
                                : synth::spec_from_json(nlohmann::ordered_json::parse(read_file(a.spec_path)));
    if (a.seed) spec.seed = *a.seed;
    if (a.n) spec.n_crashes = *a.n;
    if (a.tribal_fraction) spec.tribal_fraction = *a.tribal_fraction;
    for (const auto& c : a.clusters) {
      const auto v = numbers(c, "cluster", 3, 4);
      spec.clusters.push_back({v[0], v[1], v[2], v.size() == 4 ? v[3] : 0.005});
    }
    if (!a.lattice.empty()) {
      const auto v = numbers(a.lattice, "lattice", 4, 4);
      spec.lattice = synth::Lattice{v[0], v[1], v[2], static_cast<int>(v[3])};
    }
    spec.validate();
    if (a.print_spec) emit(synth::spec_to_json(spec).dump(2) + "\n");
    data = synth::generate(spec);
  }
  const auto sources = synth::to_sources(data);
  write_file(dir / "crashes.csv", sources.crash_csv);
  write_file(dir / "persons.csv", sources.person_csv);
  write_file(dir / "boundaries.geojson", sources.boundaries_geojson);
  std::fprintf(stderr, "wrote %zu crashes to %s\n", data.crashes.size(), dir.string().c_str());
  return kExitOk;
}

int cmd_serve(const Globals& g, const std::string& listen) {
  auto config = resolve_config(g);
  if (!listen.empty()) config.listen_addr = listen;
  auto store = std::make_shared<SnapshotStore>();
  if (has_snapshot(config.data_dir)) {
    auto snapshot = load_snapshot(config.data_dir);
    log_event("snapshot_loaded", Json{{"snapshot_id", snapshot->id()}, {"data_dir", config.data_dir.string()}});
    store->publish(std::move(snapshot));
  } else {
    log_event("no_snapshot", Json{{"data_dir", config.data_dir.string()}});
  }

  // Deliver SIGINT/SIGTERM to a waiter thread instead of an async handler.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  Server server(config, store);
  if (!server.bind()) {
    log_event("bind_failed", Json{{"listen_addr", config.listen_addr}});
    return kExitFatal;
  }
  std::thread waiter([&server, signals] {
    int sig = 0;
    sigwait(&signals, &sig);
    log_event("shutdown_requested", Json{{"signal", sig}});
    server.stop();
  });
  server.run();
  if (waiter.joinable()) {
    // run() can also end without a signal; wake the waiter so it exits.
    pthread_kill(waiter.native_handle(), SIGTERM);
    waiter.join();
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tribal crash severity analytics"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--data-dir", g.data_dir, "snapshot directory (overrides DATA_DIR)");
  app.add_option("--config", g.config_path, "JSON service configuration");

  IngestArgs ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "validate extracts and build a snapshot");
  ingest_cmd->add_option("--crashes", ingest.crashes, "crash CSV")->required();
  ingest_cmd->add_option("--persons", ingest.persons, "person CSV");
  ingest_cmd->add_option("--boundaries", ingest.boundaries, "reservation GeoJSON");
  ingest_cmd->add_option("--schema", ingest.schema, "JSON map of logical field -> column name");

  std::string kind;
  std::string format = "csv";
  QueryArgs report_q;
  auto* report_cmd = app.add_subcommand("report", "print a summary table");
  report_cmd->add_option("kind", kind, "summary | breakdown | road | rankings | crash-types")
      ->required()
      ->check(CLI::IsMember({"summary", "breakdown", "road", "rankings", "crash-types"}));
  report_cmd->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  add_filter_options(report_cmd, report_q);
  report_q.add(report_cmd, "dimension", "dimension", "sex | age_group | key_factor | road_category");
  report_q.add(report_cmd, "attribution", "attribution", "primary_person | any_person");
  report_q.add(report_cmd, "age-bins", "age_bins", "standard | as_printed");
  report_q.add(report_cmd, "n", "n", "crash types to list");
  report_q.add(report_cmd, "weight", "weight", "total | kab");

  QueryArgs hot_q;
  std::string hot_out;
  std::string hot_csv;
  auto* hot_cmd = app.add_subcommand("hotspots", "Gi* hotspot grid");
  add_filter_options(hot_cmd, hot_q);
  hot_q.add(hot_cmd, "cell", "cell", "cell size in degrees");
  hot_q.add(hot_cmd, "radius", "radius", "neighbourhood radius in cells");
  hot_q.add(hot_cmd, "cells", "cells", "all | nonempty | significant");
  hot_cmd->add_option("--out", hot_out, "GeoJSON output path (default stdout)");
  hot_cmd->add_option("--csv", hot_csv, "also write a CSV of cells");

  SynthArgs synth_args;
  auto* synth_cmd = app.add_subcommand("synth", "generate synthetic extracts");
  synth_cmd->add_option("--spec", synth_args.spec_path, "JSON generator spec");
  synth_cmd->add_option("--preset", synth_args.preset, "wisconsin | marginals")
      ->check(CLI::IsMember({"wisconsin", "marginals"}));
  synth_cmd->add_option("--seed", synth_args.seed, "64-bit seed");
  synth_cmd->add_option("--n", synth_args.n, "number of crashes");
  synth_cmd->add_option("--tribal-fraction", synth_args.tribal_fraction, "share of crashes on tribal land");
  synth_cmd->add_option("--cluster", synth_args.clusters, "lon,lat,intensity[,spread]; repeatable");
  synth_cmd->add_option("--lattice", synth_args.lattice, "origin_lon,origin_lat,step,side");
  synth_cmd->add_option("--out-dir", synth_args.out_dir, "output directory");
  synth_cmd->add_flag("--print-spec", synth_args.print_spec, "echo the effective spec as JSON");

  std::string listen;
  auto* serve_cmd = app.add_subcommand("serve", "run the HTTP API");
  serve_cmd->add_option("--listen", listen, "host:port (overrides LISTEN_ADDR)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitFatal;
  }

  try {
    if (*ingest_cmd) return cmd_ingest(g, ingest);
    if (*report_cmd) return cmd_report(g, kind, format, report_q);
    if (*hot_cmd) return cmd_hotspots(g, hot_q, hot_out, hot_csv);
    if (*synth_cmd) return cmd_synth(synth_args);
    if (*serve_cmd) return cmd_serve(g, listen);
  } catch (const InvalidArgument& e) {
    std::fprintf(stderr, "error: %s: %s\n", e.param().c_str(), e.what());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
  }
  return kExitFatal;
}
