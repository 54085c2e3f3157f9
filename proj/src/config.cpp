#include "mrac/config.hpp"

#include <fstream>

#include "mrac/errors.hpp"

namespace mrac {

namespace {

void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                         const std::string& section) {
  if (!j.is_object()) throw ConfigError("config section '" + section + "' must be an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* a : allowed) {
      if (key == a) known = true;
    }
    if (!known) throw ConfigError("unknown key '" + section + "." + key + "'");
  }
}

template <typename T>
T get_or(const nlohmann::json& j, const char* key, T fallback, const std::string& section) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("bad value for '" + section + "." + std::string(key) + "'");
  }
}

Pose pose_or(const nlohmann::json& j, const char* key, Pose fallback, const std::string& section) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer()) {
    throw ConfigError("'" + section + "." + std::string(key) + "' must be [row, col]");
  }
  return Pose{v[0].get<int>(), v[1].get<int>()};
}

std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

std::string init_kind_name(InitKind kind) {
  switch (kind) {
    case InitKind::MaxEntropy: return "max_entropy";
    case InitKind::PriorKnowledge: return "prior_knowledge";
    case InitKind::Random: return "random";
  }
  return "unknown";
}

std::optional<InitKind> init_kind_from_name(std::string_view name) {
  if (name == "max_entropy") return InitKind::MaxEntropy;
  if (name == "prior_knowledge") return InitKind::PriorKnowledge;
  if (name == "random") return InitKind::Random;
  return std::nullopt;
}

void RunConfig::validate() const {
  try {
    algorithm.validate();
    // Scenario checks shared with build_scenario; run them early on seed 0.
    build_scenario(scenario, 0);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (execution.seeds.empty()) throw ConfigError("execution.seeds must not be empty");
  if (execution.parallelism < 0) throw ConfigError("execution.parallelism must be >= 0");
}

RunConfig config_from_json(const nlohmann::json& j) {
  reject_unknown_keys(j, {"scenario", "algorithm", "execution"}, "config");
  RunConfig config;

  const nlohmann::json empty = nlohmann::json::object();
  const nlohmann::json& sc = j.contains("scenario") ? j.at("scenario") : empty;
  reject_unknown_keys(sc,
                      {"width", "height", "target_density", "episode_length",
                       "comm_restrictions", "initialization", "start_r", "start_rp", "p_detect",
                       "p_false_alarm"},
                      "scenario");
  ScenarioConfig& s = config.scenario;
  s.width = get_or(sc, "width", s.width, "scenario");
  s.height = get_or(sc, "height", s.height, "scenario");
  s.target_density = get_or(sc, "target_density", s.target_density, "scenario");
  s.episode_length = get_or(sc, "episode_length", s.episode_length, "scenario");
  s.comm_restrictions = get_or(sc, "comm_restrictions", s.comm_restrictions, "scenario");
  const auto init_name =
      get_or<std::string>(sc, "initialization", init_kind_name(s.initialization), "scenario");
  const auto init = init_kind_from_name(init_name);
  if (!init) throw ConfigError("unknown scenario.initialization '" + init_name + "'");
  s.initialization = *init;
  s.start_r = pose_or(sc, "start_r", s.start_r, "scenario");
  s.start_rp = pose_or(sc, "start_rp", Pose{s.height - 1, s.width - 1}, "scenario");
  s.sensor.p_detect = get_or(sc, "p_detect", s.sensor.p_detect, "scenario");
  s.sensor.p_false_alarm = get_or(sc, "p_false_alarm", s.sensor.p_false_alarm, "scenario");
  if (!(s.sensor.p_detect >= 0.0 && s.sensor.p_detect <= 1.0) ||
      !(s.sensor.p_false_alarm >= 0.0 && s.sensor.p_false_alarm <= 1.0)) {
    throw ConfigError("sensor probabilities must lie in [0, 1]");
  }

  const nlohmann::json& al = j.contains("algorithm") ? j.at("algorithm") : empty;
  reject_unknown_keys(
      al, {"name", "epsilon", "m_batch", "initial_fraction", "slot_cap", "horizon"}, "algorithm");
  AlgorithmSpec& a = config.algorithm;
  const auto algo_name =
      get_or<std::string>(al, "name", algorithm_name(a.kind), "algorithm");
  const auto kind = algorithm_from_name(algo_name);
  if (!kind) throw ConfigError("unknown algorithm.name '" + algo_name + "'");
  a.kind = *kind;
  a.epsilon = get_or(al, "epsilon", a.epsilon, "algorithm");
  a.m_batch = get_or(al, "m_batch", a.m_batch, "algorithm");
  a.initial_fraction = get_or(al, "initial_fraction", a.initial_fraction, "algorithm");
  a.slot_cap = get_or(al, "slot_cap", a.slot_cap, "algorithm");
  a.horizon = get_or(al, "horizon", a.horizon, "algorithm");

  const nlohmann::json& ex = j.contains("execution") ? j.at("execution") : empty;
  reject_unknown_keys(ex, {"seeds", "parallelism", "output_dir", "run_id"}, "execution");
  ExecutionConfig& e = config.execution;
  e.seeds = get_or(ex, "seeds", e.seeds, "execution");
  e.parallelism = get_or(ex, "parallelism", e.parallelism, "execution");
  e.output_dir = get_or(ex, "output_dir", e.output_dir, "execution");
  e.run_id = get_or(ex, "run_id", e.run_id, "execution");

  config.validate();
  return config;
}

nlohmann::json config_to_json(const RunConfig& config) {
  nlohmann::json j;
  const ScenarioConfig& s = config.scenario;
  j["scenario"] = {{"width", s.width},
                   {"height", s.height},
                   {"target_density", s.target_density},
                   {"episode_length", s.episode_length},
                   {"comm_restrictions", s.comm_restrictions},
                   {"initialization", init_kind_name(s.initialization)},
                   {"start_r", {s.start_r.row, s.start_r.col}},
                   {"start_rp", {s.start_rp.row, s.start_rp.col}},
                   {"p_detect", s.sensor.p_detect},
                   {"p_false_alarm", s.sensor.p_false_alarm}};
  const AlgorithmSpec& a = config.algorithm;
  j["algorithm"] = {{"name", algorithm_name(a.kind)},
                    {"epsilon", a.epsilon},
                    {"m_batch", a.m_batch},
                    {"initial_fraction", a.initial_fraction},
                    {"slot_cap", a.slot_cap},
                    {"horizon", a.horizon}};
  const ExecutionConfig& e = config.execution;
  j["execution"] = {{"seeds", e.seeds},
                    {"parallelism", e.parallelism},
                    {"output_dir", e.output_dir},
                    {"run_id", e.run_id}};
  return j;
}

nlohmann::json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("invalid JSON in '" + path.string() + "': " + e.what());
  }
}

void apply_override(nlohmann::json& j, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("override must look like section.key=value");
  }
  const std::string_view path = assignment.substr(0, eq);
  const std::string_view raw = assignment.substr(eq + 1);

  nlohmann::json value;
  try {
    value = nlohmann::json::parse(raw);
  } catch (const nlohmann::json::exception&) {
    value = std::string(raw);  // unquoted strings like initialization=random
  }

  nlohmann::json* node = &j;
  std::string_view rest = path;
  while (true) {
    const auto dot = rest.find('.');
    if (dot == std::string_view::npos) {
      (*node)[std::string(rest)] = value;
      return;
    }
    node = &(*node)[std::string(rest.substr(0, dot))];
    rest = rest.substr(dot + 1);
  }
}

std::string config_digest(const RunConfig& config) {
  nlohmann::json j = config_to_json(config);
  j["execution"].erase("output_dir");
  j["execution"].erase("run_id");
  j["execution"].erase("parallelism");
  const std::uint64_t h = fnv1a(j.dump());
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf, 12);
}

std::string resolved_run_id(const RunConfig& config) {
  if (!config.execution.run_id.empty()) return config.execution.run_id;
  return "run-" + config_digest(config);
}

}  // namespace mrac
