#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mrac/enforce.hpp"
#include "mrac/relaxed.hpp"
#include "mrac/scenario.hpp"
#include "mrac/simp.hpp"

namespace mrac {

enum class AlgorithmKind { BaselineI, BaselineII, EnforceAC, REnforceAC, REnforceACSimp };

std::string algorithm_name(AlgorithmKind kind);
std::optional<AlgorithmKind> algorithm_from_name(std::string_view name);

struct AlgorithmSpec {
  AlgorithmKind kind = AlgorithmKind::EnforceAC;
  double epsilon = 0.3;           // relaxed variants only
  int m_batch = 4;                // simp only
  double initial_fraction = 0.25; // simp only
  int slot_cap = static_cast<int>(kDefaultSlotCap);
  int horizon = 1;

  void validate() const;
};

/// Restricted communication medium. Deliveries are logged; nothing is ever
/// delivered at a blocked timestep.
struct Channel {
  std::set<int> restrictions;

  struct LogEntry {
    int time = 0;
    int sender = 0;
    std::size_t payload_size = 0;
  };
  std::vector<LogEntry> log;

  bool open_at(int t) const { return restrictions.find(t) == restrictions.end(); }
};

struct StepRecord {
  int t = 0;
  std::string action_r;   // joint action committed by robot r (label form)
  std::string action_rp;  // joint action committed by robot r'
  bool not_ac = false;
  int comms = 0;  // delivered one-way transmissions this step
  double j_r = 0.0;
  double j_rp = 0.0;
  int p_r = 0;  // steps since the histories were last fully consistent
  int p_rp = 0;
  bool forced = false;  // a required comm was blocked; step-1 fallback
  std::optional<GuaranteeTriple> guarantee;            // declared relaxed steps
  std::optional<std::pair<double, double>> cl_bracket; // simp declarations
  std::uint64_t evaluated_realizations = 0;
  double wall_ms = 0.0;
};

struct EpisodeMetrics {
  std::uint64_t seed = 0;
  std::vector<StepRecord> steps;
  int not_ac_count = 0;
  long long comm_count = 0;
  int forced_steps = 0;
  std::uint64_t evaluated_realizations = 0;
  double wall_ms_total = 0.0;
  double mean_j_r = 0.0;
  Channel channel;
};

/// Runs one decentralized two-agent episode: per timestep each agent senses,
/// plans under the selected algorithm (communicating through the restricted
/// channel), then executes its own component of its chosen joint action.
EpisodeMetrics run_episode(const Scenario& scenario, const AlgorithmSpec& spec);

/// One episode per seed; episodes are independent and may run in parallel.
/// Results are returned in seed order regardless of scheduling.
std::vector<EpisodeMetrics> run_batch(const ScenarioConfig& config, const AlgorithmSpec& spec,
                                      std::span<const std::uint64_t> seeds, int parallelism = 0);

struct BatchAggregate {
  std::size_t episodes = 0;
  double mean_not_ac = 0.0;
  double std_not_ac = 0.0;
  double mean_comms = 0.0;
  double std_comms = 0.0;
  double mean_j_r = 0.0;
  double std_j_r = 0.0;
};

BatchAggregate aggregate(std::span<const EpisodeMetrics> runs);

}  // namespace mrac
