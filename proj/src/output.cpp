#include "mrac/output.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "mrac/errors.hpp"

namespace mrac {

namespace {

bool has_epsilon(AlgorithmKind kind) {
  return kind == AlgorithmKind::REnforceAC || kind == AlgorithmKind::REnforceACSimp;
}

std::string epsilon_field(const RunConfig& config) {
  return has_epsilon(config.algorithm.kind) ? format_double(config.algorithm.epsilon)
                                            : std::string{};
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  double round_trip = 0.0;
  std::sscanf(buf, "%lg", &round_trip);
  if (round_trip == v) {
    // try shorter forms while they still round-trip
    for (int prec = 1; prec <= 16; ++prec) {
      char shorter[32];
      std::snprintf(shorter, sizeof shorter, "%.*g", prec, v);
      std::sscanf(shorter, "%lg", &round_trip);
      if (round_trip == v) return shorter;
    }
  }
  return buf;
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
    out << content;
    if (!out) throw Error("short write to '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

std::string metrics_csv(const RunConfig& config, std::span<const EpisodeMetrics> runs) {
  std::ostringstream out;
  out << "run_id,seed,t,algo,epsilon,action_r,action_rp,not_ac,comms,J_r,J_rp,p_r,p_rp\n";
  const std::string run_id = resolved_run_id(config);
  const std::string algo = algorithm_name(config.algorithm.kind);
  const std::string eps = epsilon_field(config);
  for (const EpisodeMetrics& run : runs) {
    for (const StepRecord& s : run.steps) {
      out << run_id << ',' << run.seed << ',' << s.t << ',' << algo << ',' << eps << ','
          << s.action_r << ',' << s.action_rp << ',' << (s.not_ac ? 1 : 0) << ',' << s.comms
          << ',' << format_double(s.j_r) << ',' << format_double(s.j_rp) << ',' << s.p_r << ','
          << s.p_rp << '\n';
    }
  }
  return out.str();
}

std::string summary_csv(const RunConfig& config, std::span<const EpisodeMetrics> runs) {
  std::ostringstream out;
  out << "run_id,seed,algo,epsilon,steps,not_ac_count,not_ac_pct,comm_count,comm_pct,mean_J_r,"
         "forced_steps,evaluated_realizations\n";
  const std::string run_id = resolved_run_id(config);
  const std::string algo = algorithm_name(config.algorithm.kind);
  const std::string eps = epsilon_field(config);
  for (const EpisodeMetrics& run : runs) {
    const auto steps = static_cast<double>(run.steps.size());
    out << run_id << ',' << run.seed << ',' << algo << ',' << eps << ',' << run.steps.size()
        << ',' << run.not_ac_count << ','
        << format_double(100.0 * static_cast<double>(run.not_ac_count) / steps) << ','
        << run.comm_count << ','
        << format_double(100.0 * static_cast<double>(run.comm_count) / (2.0 * steps)) << ','
        << format_double(run.mean_j_r) << ',' << run.forced_steps << ','
        << run.evaluated_realizations << '\n';
  }
  return out.str();
}

std::string trace_jsonl(const EpisodeMetrics& run) {
  std::ostringstream out;
  for (const StepRecord& s : run.steps) {
    nlohmann::ordered_json line;
    line["t"] = s.t;
    line["action_r"] = s.action_r;
    line["action_rp"] = s.action_rp;
    line["not_ac"] = s.not_ac;
    line["comms"] = s.comms;
    line["p_r"] = s.p_r;
    line["p_rp"] = s.p_rp;
    line["forced"] = s.forced;
    if (s.guarantee) {
      line["guarantee"] = {{"p_ac", s.guarantee->p_ac},
                           {"p_not_ac", s.guarantee->p_not_ac},
                           {"p_comm_from_peer", s.guarantee->p_comm_from_peer}};
    } else {
      line["guarantee"] = nullptr;
    }
    if (s.cl_bracket) {
      line["cl_bracket"] = {s.cl_bracket->first, s.cl_bracket->second};
    } else {
      line["cl_bracket"] = nullptr;
    }
    line["evaluated_realizations"] = s.evaluated_realizations;
    line["j_r"] = s.j_r;
    line["j_rp"] = s.j_rp;
    out << line.dump() << '\n';
  }
  out << nlohmann::ordered_json{{"seed", run.seed},
                                {"not_ac_count", run.not_ac_count},
                                {"comm_count", run.comm_count},
                                {"forced_steps", run.forced_steps}}
             .dump()
      << '\n';
  return out.str();
}

void write_run_outputs(const std::filesystem::path& dir, const RunConfig& config,
                       std::span<const EpisodeMetrics> runs) {
  atomic_write(dir / "resolved_config.json", config_to_json(config).dump(2) + "\n");
  atomic_write(dir / "metrics.csv", metrics_csv(config, runs));
  atomic_write(dir / "summary.csv", summary_csv(config, runs));

  const BatchAggregate agg = aggregate(runs);
  const auto steps = static_cast<double>(config.scenario.episode_length);
  nlohmann::ordered_json aj;
  aj["run_id"] = resolved_run_id(config);
  aj["algo"] = algorithm_name(config.algorithm.kind);
  if (has_epsilon(config.algorithm.kind)) aj["epsilon"] = config.algorithm.epsilon;
  aj["episode_length"] = config.scenario.episode_length;
  aj["seeds"] = config.execution.seeds;
  aj["episodes"] = agg.episodes;
  aj["mean_not_ac"] = agg.mean_not_ac;
  aj["std_not_ac"] = agg.std_not_ac;
  aj["mean_not_ac_pct"] = 100.0 * agg.mean_not_ac / steps;
  aj["mean_comms"] = agg.mean_comms;
  aj["std_comms"] = agg.std_comms;
  aj["mean_comms_pct"] = 100.0 * agg.mean_comms / (2.0 * steps);
  aj["mean_J_r"] = agg.mean_j_r;
  aj["std_J_r"] = agg.std_j_r;
  atomic_write(dir / "aggregate.json", aj.dump(2) + "\n");

  std::ostringstream timing;
  timing << "run_id,seed,t,wall_ms\n";
  const std::string run_id = resolved_run_id(config);
  for (const EpisodeMetrics& run : runs) {
    for (const StepRecord& s : run.steps) {
      timing << run_id << ',' << run.seed << ',' << s.t << ',' << format_double(s.wall_ms)
             << '\n';
    }
  }
  atomic_write(dir / "timing.csv", timing.str());

  for (const EpisodeMetrics& run : runs) {
    atomic_write(dir / "traces" / ("trace_seed_" + std::to_string(run.seed) + ".jsonl"),
                 trace_jsonl(run));
  }
}

}  // namespace mrac
