#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mrac/relaxed.hpp"

namespace mrac {

/// Partial-sum bounds on the cumulative likelihood of every action, derived
/// from a subset of the realization space. lb sums the exact likelihoods of
/// evaluated realizations favoring the action; ub is one minus everyone
/// else's lb. Bounds tighten monotonically as realizations are added.
struct BoundsTable {
  std::vector<double> lb;  // aligned with the actions span
  std::vector<double> ub;
  std::vector<std::uint32_t> evaluated;  // realization indices, ascending
};

BoundsTable bounds_from_subset(const CellBelief& common, const ObsSeqSpace& space,
                               std::span<const std::uint32_t> subset,
                               std::span<const JointAction> actions, const ObsModel& m,
                               const Grid& grid, Pose pose_r, Pose pose_rp);

/// Candidate actions that are not dominated: a' survives unless some action's
/// lower bound clears a's upper bound by more than the tie tolerance. The
/// surviving set always contains the rank-1 action.
std::vector<std::size_t> prune(const BoundsTable& bounds);

/// Grows the evaluated subset in canonical order, m_batch realizations at a
/// time, until one action's lower bound clears every rival's upper bound (or
/// the subset covers the space, where the bounds collapse to the exact
/// cumulative likelihoods and the rank-1 action is returned directly).
std::size_t adaptive_bounds_pos(const CellBelief& common, const ObsSeqSpace& space,
                                std::span<const std::uint32_t> initial_subset, int m_batch,
                                std::span<const JointAction> actions, const ObsModel& m,
                                const Grid& grid, Pose pose_r, Pose pose_rp,
                                std::uint64_t* evaluated_count = nullptr);
const JointAction& adaptive_bounds(const CellBelief& common, const ObsSeqSpace& space,
                                   std::span<const std::uint32_t> initial_subset, int m_batch,
                                   std::span<const JointAction> actions, const ObsModel& m,
                                   const Grid& grid, Pose pose_r, Pose pose_rp);

struct RVerifySimpOutcome {
  bool declared = false;
  std::size_t step1_pos = 0;
  double cl_lb = 0.0;  // bracket on the step-2 cumulative likelihood of the
  double cl_ub = 1.0;  // declared action, valid when declared
  bool deterministic = false;  // separation in both steps, rivals under threshold
  std::uint64_t evaluated_realizations = 0;
};

/// Bounded-evaluation mirror of r_verify: decides the same declare-vs-comm
/// outcome for the same inputs while evaluating a subset of each step's
/// realization space whenever the partial bounds already certify the
/// decision. Subsets grow in canonical prefix order so independent agents
/// expand identically without coordination.
RVerifySimpOutcome r_verify_simp(const HistoryLedger& ledger, const CellBelief& prior,
                                 std::span<const JointAction> actions, const ObsModel& m,
                                 const Grid& grid, Pose pose_r, Pose pose_rp, double epsilon,
                                 int m_batch, double initial_fraction,
                                 std::size_t slot_cap = kDefaultSlotCap);

}  // namespace mrac
