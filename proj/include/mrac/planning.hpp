#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mrac/belief.hpp"
#include "mrac/scenario.hpp"

namespace mrac {

/// A pair of motion-primitive sequences over the planning horizon, one per
/// robot. Identical length required; the joint-action space for horizon L has
/// (4*4)^L members.
struct JointAction {
  std::vector<MotionPrimitive> robot_r;
  std::vector<MotionPrimitive> robot_rp;

  std::size_t horizon() const { return robot_r.size(); }
  bool operator==(const JointAction&) const = default;
};

/// Ordinal into the canonical enumeration of the joint-action space: per step,
/// row-major over robot-r primitive then robot-r' primitive; step 0 is the
/// most significant digit. Identical on every agent, so it doubles as the
/// shared tie-breaking order.
using ActionIndex = std::uint32_t;

ActionIndex action_ordinal(const JointAction& a);

/// All (16)^L joint actions in canonical order (position == ordinal).
std::vector<JointAction> enumerate_joint_actions(std::size_t horizon);

/// Compact text form, e.g. "NE:SW" for horizon 2.
std::string action_label(const JointAction& a);
std::optional<JointAction> action_from_label(std::string_view label);

/// One missing observation: which robot observed which cell at which time.
struct ObsSlot {
  int time = 0;
  int robot = 0;
  int cell = 0;

  bool operator==(const ObsSlot&) const = default;
};

/// A space of unshared-observation realizations: the Cartesian product of
/// {0,1} over the slots. Realizations are enumerated canonically (slot-major,
/// slot 0 as the most significant bit, value 0 before 1) so that independent
/// agents process them in the same order.
struct ObsSeqSpace {
  std::vector<ObsSlot> slots;  // time-ordered

  std::size_t realization_count() const { return std::size_t{1} << slots.size(); }
  int slot_value(std::uint32_t realization, std::size_t slot) const;
  std::vector<Observation> realize(std::uint32_t realization) const;
};

/// J-values within this distance of the maximum count as tied; ties resolve
/// to the smallest ActionIndex on every agent.
inline constexpr double kTieTolerance = 1e-12;

/// Default bound on enumerable slot counts (2^12 = 4096 realizations).
inline constexpr std::size_t kDefaultSlotCap = 12;

/// Expected sum of entropy rewards of the posterior beliefs after each future
/// observation step, computed exactly by enumerating all binary joint
/// observations. Each robot observes the cell at its propagated pose.
double evaluate_objective(const CellBelief& b, const JointAction& a, const ObsModel& m,
                          const Grid& grid, Pose pose_r, Pose pose_rp);

/// Shared argmax rule: maximal value, ties (within kTieTolerance of the max)
/// broken by the smallest ordinal. Returns a position into the spans.
std::size_t argmax_position(std::span<const double> values, std::span<const ActionIndex> ordinals);

/// Position of the best action in `actions` under evaluate_objective.
std::size_t best_action_pos(const CellBelief& b, std::span<const JointAction> actions,
                            const ObsModel& m, const Grid& grid, Pose pose_r, Pose pose_rp);
const JointAction& best_action(const CellBelief& b, std::span<const JointAction> actions,
                               const ObsModel& m, const Grid& grid, Pose pose_r, Pose pose_rp);

/// Favored action (and exact sequence likelihood) of one realization of a
/// slot space: the best action under the belief conditioned on common history
/// plus that realization.
struct RealizationEval {
  std::size_t favored_pos = 0;
  double likelihood = 0.0;
};
RealizationEval evaluate_realization(const CellBelief& common, const ObsSeqSpace& space,
                                     std::uint32_t realization,
                                     std::span<const JointAction> actions, const ObsModel& m,
                                     const Grid& grid, Pose pose_r, Pose pose_rp);

std::size_t favored_action_pos(const CellBelief& common, const ObsSeqSpace& space,
                               std::uint32_t realization, std::span<const JointAction> actions,
                               const ObsModel& m, const Grid& grid, Pose pose_r, Pose pose_rp);
const JointAction& favored_action(const CellBelief& common, const ObsSeqSpace& space,
                                  std::uint32_t realization, std::span<const JointAction> actions,
                                  const ObsModel& m, const Grid& grid, Pose pose_r, Pose pose_rp);

/// Partition of a realization space by favored action.
struct ConsistencySets {
  /// realizations_by_action[i] holds the realizations favoring actions[i],
  /// each in canonical order.
  std::vector<std::vector<std::uint32_t>> realizations_by_action;
  /// Set iff a single action owns the whole space (con_a = true).
  std::optional<std::size_t> consistent_for;
};

ConsistencySets consistent_obs_sets(const CellBelief& common, const ObsSeqSpace& space,
                                    std::span<const JointAction> actions, const ObsModel& m,
                                    const Grid& grid, Pose pose_r, Pose pose_rp,
                                    std::size_t slot_cap = kDefaultSlotCap);

}  // namespace mrac
