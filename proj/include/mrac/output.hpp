#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "mrac/config.hpp"
#include "mrac/runtime.hpp"

namespace mrac {

/// Shortest exact decimal form of a double ("%.17g" trimmed), identical for
/// identical bit patterns.
std::string format_double(double v);

/// Writes content to path via a temp file + rename, creating parent
/// directories as needed.
void atomic_write(const std::filesystem::path& path, const std::string& content);

/// Writes the full result set of one run into `dir`:
///   resolved_config.json, metrics.csv, summary.csv, aggregate.json,
///   timing.csv (wall-clock columns live here, keeping metrics.csv
///   byte-reproducible) and traces/trace_seed_<seed>.jsonl per seed.
void write_run_outputs(const std::filesystem::path& dir, const RunConfig& config,
                       std::span<const EpisodeMetrics> runs);

/// One JSON line per timestep for one episode (the trace file content).
std::string trace_jsonl(const EpisodeMetrics& run);

std::string metrics_csv(const RunConfig& config, std::span<const EpisodeMetrics> runs);
std::string summary_csv(const RunConfig& config, std::span<const EpisodeMetrics> runs);

}  // namespace mrac
