#include "mrac/scenario.hpp"

#include <numeric>
#include <string>

#include "mrac/errors.hpp"

namespace mrac {

char primitive_letter(MotionPrimitive p) {
  switch (p) {
    case MotionPrimitive::North: return 'N';
    case MotionPrimitive::South: return 'S';
    case MotionPrimitive::East: return 'E';
    case MotionPrimitive::West: return 'W';
  }
  return '?';
}

std::optional<MotionPrimitive> primitive_from_letter(char c) {
  switch (c) {
    case 'N': return MotionPrimitive::North;
    case 'S': return MotionPrimitive::South;
    case 'E': return MotionPrimitive::East;
    case 'W': return MotionPrimitive::West;
    default: return std::nullopt;
  }
}

Pose move(Pose p, MotionPrimitive a, const Grid& g) {
  Pose next = p;
  switch (a) {
    case MotionPrimitive::North: next.row -= 1; break;
    case MotionPrimitive::South: next.row += 1; break;
    case MotionPrimitive::East: next.col += 1; break;
    case MotionPrimitive::West: next.col -= 1; break;
  }
  return g.contains(next) ? next : p;
}

Scenario build_scenario(const ScenarioConfig& config, std::uint64_t seed) {
  if (config.width <= 0 || config.height <= 0) {
    throw InputError("grid dimensions must be positive");
  }
  if (config.episode_length <= 0) throw InputError("episode length must be positive");
  if (config.comm_restrictions < 0 || config.comm_restrictions > config.episode_length) {
    throw InputError("comm_restrictions must lie in [0, episode_length]");
  }
  if (!(config.target_density >= 0.0 && config.target_density <= 1.0)) {
    throw InputError("target_density must lie in [0, 1]");
  }
  Scenario s;
  s.grid = Grid{config.width, config.height};
  if (!s.grid.contains(config.start_r) || !s.grid.contains(config.start_rp)) {
    throw InputError("start pose outside the grid");
  }
  s.start_r = config.start_r;
  s.start_rp = config.start_rp;
  s.episode_length = config.episode_length;
  s.sensor = config.sensor;
  s.initialization = config.initialization;
  s.seed = seed;

  Rng rng(seed, /*stream=*/0);
  s.ground_truth.resize(static_cast<std::size_t>(s.grid.cell_count()));
  for (auto& cell : s.ground_truth) {
    cell = rng.bernoulli(config.target_density) ? 1 : 0;
  }

  // Restricted timesteps: uniform without replacement via partial Fisher-Yates.
  std::vector<int> steps(static_cast<std::size_t>(config.episode_length));
  std::iota(steps.begin(), steps.end(), 1);
  for (int i = 0; i < config.comm_restrictions; ++i) {
    const auto j = i + static_cast<int>(rng.next_below(steps.size() - static_cast<std::size_t>(i)));
    std::swap(steps[static_cast<std::size_t>(i)], steps[static_cast<std::size_t>(j)]);
    s.restrictions.insert(steps[static_cast<std::size_t>(i)]);
  }
  return s;
}

CellBelief init_prior(InitKind kind, std::span<const std::uint8_t> ground_truth, Rng& rng) {
  std::vector<double> probs(ground_truth.size());
  switch (kind) {
    case InitKind::MaxEntropy:
      for (auto& p : probs) p = 0.5;
      break;
    case InitKind::PriorKnowledge:
      for (std::size_t i = 0; i < probs.size(); ++i) probs[i] = ground_truth[i] ? 0.7 : 0.3;
      break;
    case InitKind::Random:
      for (auto& p : probs) p = rng.uniform(0.05, 0.95);
      break;
  }
  return CellBelief(std::move(probs));
}

Observation sense(const Scenario& s, Pose pose, int robot, int time, Rng& rng) {
  if (!s.grid.contains(pose)) throw InputError("sensing pose outside the grid");
  const int cell = s.grid.cell_index(pose);
  const bool occupied = s.ground_truth[static_cast<std::size_t>(cell)] != 0;
  const double p_one = occupied ? s.sensor.p_detect : s.sensor.p_false_alarm;
  return Observation{time, robot, cell, rng.bernoulli(p_one) ? 1 : 0};
}

}  // namespace mrac
