#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mrac/config.hpp"
#include "mrac/errors.hpp"
#include "mrac/output.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

std::filesystem::path default_output_dir(const mrac::RunConfig& config) {
  if (!config.execution.output_dir.empty()) return config.execution.output_dir;
  const char* root = std::getenv("MRAC_OUT_ROOT");
  const std::filesystem::path base = root && *root ? root : "runs";
  return base / mrac::resolved_run_id(config);
}

std::vector<std::uint64_t> parse_seed_list(const std::string& csv) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    seeds.push_back(std::stoull(item));
  }
  if (seeds.empty()) throw mrac::ConfigError("--seeds expects a comma-separated list");
  return seeds;
}

int cmd_run(const std::string& config_path, const std::vector<std::string>& overrides,
            const std::string& seeds_csv, const std::string& out_dir) {
  nlohmann::json raw = mrac::load_json_file(config_path);
  for (const std::string& o : overrides) mrac::apply_override(raw, o);
  mrac::RunConfig config = mrac::config_from_json(raw);
  if (!seeds_csv.empty()) config.execution.seeds = parse_seed_list(seeds_csv);
  if (!out_dir.empty()) config.execution.output_dir = out_dir;
  config.validate();

  const auto runs = mrac::run_batch(config.scenario, config.algorithm, config.execution.seeds,
                                    config.execution.parallelism);
  const std::filesystem::path dir = default_output_dir(config);
  mrac::write_run_outputs(dir, config, runs);

  const mrac::BatchAggregate agg = mrac::aggregate(runs);
  const double steps = config.scenario.episode_length;
  std::cout << "run " << mrac::resolved_run_id(config) << ": "
            << mrac::algorithm_name(config.algorithm.kind) << " over " << agg.episodes
            << " seeds, E=" << config.scenario.episode_length << "\n"
            << "  not_ac " << agg.mean_not_ac << " +- " << agg.std_not_ac << " ("
            << 100.0 * agg.mean_not_ac / steps << "%)\n"
            << "  comms  " << agg.mean_comms << " +- " << agg.std_comms << " ("
            << 100.0 * agg.mean_comms / (2.0 * steps) << "% of 2E)\n"
            << "  mean J " << agg.mean_j_r << "\n"
            << "  outputs in " << dir.string() << "\n";
  return kExitOk;
}

struct CompareRow {
  std::string dir;
  std::string algo;
  std::string epsilon;
  int episode_length = 0;
  double mean_not_ac = 0, std_not_ac = 0, not_ac_pct = 0;
  double mean_comms = 0, std_comms = 0, comms_pct = 0;
  double mean_j = 0;
};

int cmd_compare(const std::vector<std::string>& dirs, const std::string& csv_out) {
  std::vector<CompareRow> rows;
  for (const std::string& d : dirs) {
    const std::filesystem::path path = std::filesystem::path(d) / "aggregate.json";
    const nlohmann::json aj = mrac::load_json_file(path);
    CompareRow row;
    row.dir = d;
    row.algo = aj.at("algo").get<std::string>();
    if (aj.contains("epsilon")) row.epsilon = mrac::format_double(aj.at("epsilon").get<double>());
    row.episode_length = aj.at("episode_length").get<int>();
    row.mean_not_ac = aj.at("mean_not_ac").get<double>();
    row.std_not_ac = aj.at("std_not_ac").get<double>();
    row.not_ac_pct = aj.at("mean_not_ac_pct").get<double>();
    row.mean_comms = aj.at("mean_comms").get<double>();
    row.std_comms = aj.at("std_comms").get<double>();
    row.comms_pct = aj.at("mean_comms_pct").get<double>();
    row.mean_j = aj.at("mean_J_r").get<double>();
    rows.push_back(row);
  }
  for (const CompareRow& row : rows) {
    if (row.episode_length != rows.front().episode_length) {
      throw mrac::ConfigError("episode lengths differ between runs; comparison is meaningless");
    }
  }

  std::ostringstream csv;
  csv << "dir,algo,epsilon,episode_length,mean_not_ac,std_not_ac,not_ac_pct,mean_comms,"
         "std_comms,comms_pct,mean_J_r\n";
  for (const CompareRow& r : rows) {
    csv << r.dir << ',' << r.algo << ',' << r.epsilon << ',' << r.episode_length << ','
        << mrac::format_double(r.mean_not_ac) << ',' << mrac::format_double(r.std_not_ac) << ','
        << mrac::format_double(r.not_ac_pct) << ',' << mrac::format_double(r.mean_comms) << ','
        << mrac::format_double(r.std_comms) << ',' << mrac::format_double(r.comms_pct) << ','
        << mrac::format_double(r.mean_j) << '\n';
  }
  if (!csv_out.empty()) {
    mrac::atomic_write(csv_out, csv.str());
  }

  std::printf("%-28s %-18s %-8s %-22s %-22s %-12s\n", "run", "algo", "eps", "not_ac (mean+-std)",
              "comms (mean+-std)", "mean J");
  for (const CompareRow& r : rows) {
    char not_ac[64];
    std::snprintf(not_ac, sizeof not_ac, "%.1f +- %.1f (%.1f%%)", r.mean_not_ac, r.std_not_ac,
                  r.not_ac_pct);
    char comms[64];
    std::snprintf(comms, sizeof comms, "%.1f +- %.1f (%.1f%%)", r.mean_comms, r.std_comms,
                  r.comms_pct);
    std::printf("%-28s %-18s %-8s %-22s %-22s %-12.4f\n", r.dir.c_str(), r.algo.c_str(),
                r.epsilon.c_str(), not_ac, comms, r.mean_j);
  }
  if (csv_out.empty()) {
    std::cout << "\n" << csv.str();
  }
  return kExitOk;
}

int cmd_trace(const std::string& dir, std::uint64_t seed) {
  const std::filesystem::path path =
      std::filesystem::path(dir) / "traces" / ("trace_seed_" + std::to_string(seed) + ".jsonl");
  std::ifstream in(path);
  if (!in) {
    throw mrac::ConfigError("no trace for seed " + std::to_string(seed) + " in '" + dir + "'");
  }
  std::cout << in.rdbuf();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decentralized two-robot belief-space planning simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::string seeds_csv;
  std::string out_dir;
  CLI::App* run = app.add_subcommand("run", "Execute a configured batch of episodes");
  run->add_option("--config", config_path, "JSON run configuration")->required();
  run->add_option("--set", overrides, "Override a config value (section.key=value)");
  run->add_option("--seeds", seeds_csv, "Comma-separated seed list override");
  run->add_option("--out", out_dir, "Output directory");

  std::vector<std::string> compare_dirs;
  std::string compare_csv;
  CLI::App* compare = app.add_subcommand("compare", "Tabulate aggregates of completed runs");
  compare->add_option("dirs", compare_dirs, "Run directories")->expected(2, -1);
  compare->add_option("--csv", compare_csv, "Also write the table as CSV to this path");

  std::string trace_dir;
  std::uint64_t trace_seed = 0;
  CLI::App* trace = app.add_subcommand("trace", "Print the per-step JSON trace of one episode");
  trace->add_option("dir", trace_dir, "Run directory")->required();
  trace->add_option("--seed", trace_seed, "Seed of the episode")->required();

  try {
    app.parse(argc, argv);
    if (run->parsed()) return cmd_run(config_path, overrides, seeds_csv, out_dir);
    if (compare->parsed()) return cmd_compare(compare_dirs, compare_csv);
    if (trace->parsed()) return cmd_trace(trace_dir, trace_seed);
    return kExitConfig;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitConfig;
  } catch (const mrac::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
