#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "mrac/runtime.hpp"

namespace mrac {

struct ExecutionConfig {
  std::vector<std::uint64_t> seeds = {1};
  int parallelism = 0;  // 0 = one worker per hardware thread
  std::string output_dir;  // empty: resolved from MRAC_OUT_ROOT or ./runs
  std::string run_id;      // empty: derived from the resolved config
};

struct RunConfig {
  ScenarioConfig scenario;
  AlgorithmSpec algorithm;
  ExecutionConfig execution;

  void validate() const;
};

/// Strict schema: every field has a default, unknown keys are rejected.
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& config);

nlohmann::json load_json_file(const std::filesystem::path& path);

/// Applies a `section.key=value` override onto the raw JSON form. Values are
/// parsed as JSON when possible and fall back to strings.
void apply_override(nlohmann::json& j, std::string_view assignment);

/// Stable hex digest of the run-defining parts of a config (scenario,
/// algorithm, seeds); used as the default run id.
std::string config_digest(const RunConfig& config);

/// Explicit run id if set, otherwise "run-<digest>".
std::string resolved_run_id(const RunConfig& config);

std::string init_kind_name(InitKind kind);
std::optional<InitKind> init_kind_from_name(std::string_view name);

}  // namespace mrac
