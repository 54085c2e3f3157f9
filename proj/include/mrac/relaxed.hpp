#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mrac/verify.hpp"

namespace mrac {

/// Per-action total probability mass (under the common-history predictive) of
/// the realizations favoring that action. Values over one space sum to one
/// because every realization favors exactly one action.
struct CumulativeLikelihoodTable {
  std::vector<double> values;  // aligned with the actions span
  std::size_t best = 0;        // rank-1 position; ties resolve by ActionIndex
};

CumulativeLikelihoodTable cumulative_likelihood(const CellBelief& common,
                                                const ObsSeqSpace& space,
                                                std::span<const JointAction> actions,
                                                const ObsModel& m, const Grid& grid, Pose pose_r,
                                                Pose pose_rp,
                                                std::size_t slot_cap = kDefaultSlotCap);

/// Assembles a table from a precomputed partition and per-realization
/// likelihoods (used by tests and the sampled estimators).
CumulativeLikelihoodTable table_from_partition(const ConsistencySets& sets,
                                               std::span<const double> likelihoods,
                                               std::span<const JointAction> actions);

/// Relaxed consistency predicate: in each of steps 2 and 3, the action is
/// either the rank-1 action of the table or its cumulative likelihood exceeds
/// 1 - epsilon (strictly).
bool epsilon_mrac(const CumulativeLikelihoodTable& s2, const CumulativeLikelihoodTable& s3,
                  std::size_t action_pos, double epsilon);

struct GuaranteeTriple {
  double p_ac = 0.0;
  double p_not_ac = 0.0;
  double p_comm_from_peer = 0.0;
};

/// Probability split over the peer's three possible reactions, given that
/// this agent declares action_pos. Requires epsilon_mrac(action_pos) = true.
GuaranteeTriple guarantees(const CumulativeLikelihoodTable& s2,
                           const CumulativeLikelihoodTable& s3, std::size_t action_pos,
                           double epsilon);

struct RVerifyOutcome {
  bool declared = false;        // false means a comm is self-triggered
  std::size_t step1_pos = 0;
  std::optional<GuaranteeTriple> triple;  // set when declared
  CumulativeLikelihoodTable step2;
  CumulativeLikelihoodTable step3;
  std::uint64_t evaluated_realizations = 0;
};

/// Relaxed verification: declares the step-1 action with its guarantee triple
/// when the epsilon-consistency predicate holds, otherwise signals that this
/// agent must communicate.
RVerifyOutcome r_verify(const HistoryLedger& ledger, const CellBelief& prior,
                        std::span<const JointAction> actions, const ObsModel& m, const Grid& grid,
                        Pose pose_r, Pose pose_rp, double epsilon,
                        std::size_t slot_cap = kDefaultSlotCap);

}  // namespace mrac
