#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "mrac/belief.hpp"
#include "mrac/rng.hpp"

namespace mrac {

/// Unit-step motion primitive. North decreases the row index.
enum class MotionPrimitive : int { North = 0, South = 1, East = 2, West = 3 };

inline constexpr std::array<MotionPrimitive, 4> kAllPrimitives = {
    MotionPrimitive::North, MotionPrimitive::South, MotionPrimitive::East, MotionPrimitive::West};

char primitive_letter(MotionPrimitive p);
std::optional<MotionPrimitive> primitive_from_letter(char c);

struct Pose {
  int row = 0;
  int col = 0;

  bool operator==(const Pose&) const = default;
};

struct Grid {
  int width = 0;
  int height = 0;

  int cell_count() const { return width * height; }
  bool contains(Pose p) const {
    return p.row >= 0 && p.row < height && p.col >= 0 && p.col < width;
  }
  int cell_index(Pose p) const { return p.row * width + p.col; }
};

/// Unit step in the primitive's direction. Steps that would exit the grid
/// clamp to the current cell, so the joint-action set is identical in every
/// state.
Pose move(Pose p, MotionPrimitive a, const Grid& g);

enum class InitKind { MaxEntropy, PriorKnowledge, Random };

struct ScenarioConfig {
  int width = 10;
  int height = 10;
  double target_density = 0.2;
  int episode_length = 200;
  int comm_restrictions = 0;  // number of timesteps with blocked comms
  InitKind initialization = InitKind::MaxEntropy;
  Pose start_r{0, 0};
  Pose start_rp{9, 9};
  ObsModel sensor{};
};

/// Immutable world description; fully determined by (config, seed).
struct Scenario {
  Grid grid;
  std::vector<std::uint8_t> ground_truth;  // per-cell target presence
  Pose start_r{};
  Pose start_rp{};
  int episode_length = 0;
  std::set<int> restrictions;  // blocked timesteps, each in [1, episode_length]
  ObsModel sensor{};
  InitKind initialization = InitKind::MaxEntropy;
  std::uint64_t seed = 0;
};

Scenario build_scenario(const ScenarioConfig& config, std::uint64_t seed);

/// MaxEntropy: 0.5 everywhere. PriorKnowledge: 0.7 on occupied cells, 0.3
/// otherwise. Random: per-cell uniform on [0.05, 0.95].
CellBelief init_prior(InitKind kind, std::span<const std::uint8_t> ground_truth, Rng& rng);

/// Draws the binary reading of the cell under `pose` from the sensor model
/// conditioned on the ground truth.
Observation sense(const Scenario& s, Pose pose, int robot, int time, Rng& rng);

}  // namespace mrac
