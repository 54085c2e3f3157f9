#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mrac/belief.hpp"
#include "mrac/planning.hpp"

namespace mrac {

/// One agent's bookkeeping of what is shared and what is not. `common` holds
/// the observations both robots possess (executed actions are known to both
/// sides by assumption, so only observations are recorded). `own_unshared`
/// holds this agent's observations the peer lacks; `own_slots_as_seen_by_peer`
/// mirrors them slot-for-slot, which is how this agent knows what the peer
/// will have to reason over. `peer_missing_slots` are the peer's observations
/// this agent lacks.
struct HistoryLedger {
  std::vector<Observation> common;         // sorted by (time, robot)
  std::vector<Observation> own_unshared;   // time-ordered
  ObsSeqSpace peer_missing_slots;          // unknown peer observations
  ObsSeqSpace own_slots_as_seen_by_peer;   // one-to-one with own_unshared
  int last_consistent_time = 0;

  /// Checks the structural invariants; throws InconsistentLedgerError.
  void validate() const;
};

/// Insert keeping (time, robot) order.
void insert_sorted(std::vector<Observation>& seq, const Observation& o);

/// Belief conditioned on the common history only.
CellBelief common_belief(const HistoryLedger& ledger, const CellBelief& prior, const ObsModel& m);

/// Belief conditioned on the common history plus this agent's own unshared
/// observations (the agent's actual planning belief).
CellBelief own_belief(const HistoryLedger& ledger, const CellBelief& prior, const ObsModel& m);

/// Per-action partition of one step's realization space, plus the action that
/// owns the whole space when the partition is consistent.
using StepReport = ConsistencySets;

struct VerifyOutcome {
  std::size_t step1_pos = 0;
  StepReport step2;
  StepReport step3;
  bool mrac = false;
};

/// Best joint action under the agent's own belief.
std::size_t step1_pos(const HistoryLedger& ledger, const CellBelief& prior,
                      std::span<const JointAction> actions, const ObsModel& m, const Grid& grid,
                      Pose pose_r, Pose pose_rp);

/// Mimics the peer: partitions every realization of the observations this
/// agent is missing, conditioning on the common history only.
StepReport step2(const HistoryLedger& ledger, const CellBelief& prior,
                 std::span<const JointAction> actions, const ObsModel& m, const Grid& grid,
                 Pose pose_r, Pose pose_rp, std::size_t slot_cap = kDefaultSlotCap);

/// Mimics the peer mimicking this agent: same over the agent's own unshared
/// observation slots.
StepReport step3(const HistoryLedger& ledger, const CellBelief& prior,
                 std::span<const JointAction> actions, const ObsModel& m, const Grid& grid,
                 Pose pose_r, Pose pose_rp, std::size_t slot_cap = kDefaultSlotCap);

/// Three-step deterministic verification: mrac holds iff steps 1-3 agree on
/// one joint action, which guarantees the peer selects it too.
VerifyOutcome verify(const HistoryLedger& ledger, const CellBelief& prior,
                     std::span<const JointAction> actions, const ObsModel& m, const Grid& grid,
                     Pose pose_r, Pose pose_rp, std::size_t slot_cap = kDefaultSlotCap);

}  // namespace mrac
