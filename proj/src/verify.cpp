#include "mrac/verify.hpp"

#include <algorithm>
#include <string>

#include "mrac/errors.hpp"

namespace mrac {

namespace {

bool same_event(const Observation& o, const ObsSlot& s) {
  return o.time == s.time && o.robot == s.robot && o.cell == s.cell;
}

bool contains_event(const std::vector<Observation>& seq, int time, int robot) {
  return std::any_of(seq.begin(), seq.end(),
                     [&](const Observation& o) { return o.time == time && o.robot == robot; });
}

}  // namespace

void insert_sorted(std::vector<Observation>& seq, const Observation& o) {
  const auto pos = std::upper_bound(seq.begin(), seq.end(), o, [](const auto& a, const auto& b) {
    return a.time != b.time ? a.time < b.time : a.robot < b.robot;
  });
  seq.insert(pos, o);
}

void HistoryLedger::validate() const {
  if (own_unshared.size() != own_slots_as_seen_by_peer.slots.size()) {
    throw InconsistentLedgerError("own_unshared and its slot space disagree in size");
  }
  for (std::size_t i = 0; i < own_unshared.size(); ++i) {
    if (!same_event(own_unshared[i], own_slots_as_seen_by_peer.slots[i])) {
      throw InconsistentLedgerError("own_unshared entry does not match its slot");
    }
    if (own_unshared[i].time <= last_consistent_time) {
      throw InconsistentLedgerError("unshared observation predates the last consistent time");
    }
    if (contains_event(common, own_unshared[i].time, own_unshared[i].robot)) {
      throw InconsistentLedgerError("unshared observation duplicated in the common history");
    }
  }
  for (const ObsSlot& s : peer_missing_slots.slots) {
    if (s.time <= last_consistent_time) {
      throw InconsistentLedgerError("missing-observation slot predates the last consistent time");
    }
    if (contains_event(common, s.time, s.robot)) {
      throw InconsistentLedgerError("missing-observation slot duplicated in the common history");
    }
  }
}

CellBelief common_belief(const HistoryLedger& ledger, const CellBelief& prior, const ObsModel& m) {
  return belief_from_history(prior, ledger.common, m);
}

CellBelief own_belief(const HistoryLedger& ledger, const CellBelief& prior, const ObsModel& m) {
  CellBelief b = belief_from_history(prior, ledger.common, m);
  return belief_from_history(b, ledger.own_unshared, m);
}

std::size_t step1_pos(const HistoryLedger& ledger, const CellBelief& prior,
                      std::span<const JointAction> actions, const ObsModel& m, const Grid& grid,
                      Pose pose_r, Pose pose_rp) {
  return best_action_pos(own_belief(ledger, prior, m), actions, m, grid, pose_r, pose_rp);
}

StepReport step2(const HistoryLedger& ledger, const CellBelief& prior,
                 std::span<const JointAction> actions, const ObsModel& m, const Grid& grid,
                 Pose pose_r, Pose pose_rp, std::size_t slot_cap) {
  return consistent_obs_sets(common_belief(ledger, prior, m), ledger.peer_missing_slots, actions,
                             m, grid, pose_r, pose_rp, slot_cap);
}

StepReport step3(const HistoryLedger& ledger, const CellBelief& prior,
                 std::span<const JointAction> actions, const ObsModel& m, const Grid& grid,
                 Pose pose_r, Pose pose_rp, std::size_t slot_cap) {
  return consistent_obs_sets(common_belief(ledger, prior, m), ledger.own_slots_as_seen_by_peer,
                             actions, m, grid, pose_r, pose_rp, slot_cap);
}

VerifyOutcome verify(const HistoryLedger& ledger, const CellBelief& prior,
                     std::span<const JointAction> actions, const ObsModel& m, const Grid& grid,
                     Pose pose_r, Pose pose_rp, std::size_t slot_cap) {
  VerifyOutcome out;
  const CellBelief common = common_belief(ledger, prior, m);
  const CellBelief own = belief_from_history(common, ledger.own_unshared, m);
  out.step1_pos = best_action_pos(own, actions, m, grid, pose_r, pose_rp);
  out.step2 = consistent_obs_sets(common, ledger.peer_missing_slots, actions, m, grid, pose_r,
                                  pose_rp, slot_cap);
  out.step3 = consistent_obs_sets(common, ledger.own_slots_as_seen_by_peer, actions, m, grid,
                                  pose_r, pose_rp, slot_cap);
  out.mrac = out.step2.consistent_for == out.step1_pos && out.step3.consistent_for == out.step1_pos;
  return out;
}

}  // namespace mrac
