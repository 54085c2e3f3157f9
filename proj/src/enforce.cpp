#include "mrac/enforce.hpp"

#include <algorithm>

#include "mrac/errors.hpp"

namespace mrac {

namespace {

bool erase_slot(ObsSeqSpace& space, const Observation& o) {
  const auto it = std::find_if(space.slots.begin(), space.slots.end(), [&](const ObsSlot& s) {
    return s.time == o.time && s.robot == o.robot && s.cell == o.cell;
  });
  if (it == space.slots.end()) return false;
  space.slots.erase(it);
  return true;
}

}  // namespace

CommDecision comm_decision(const VerifyOutcome& outcome) {
  CommDecision d;
  if (outcome.mrac) return d;
  if (outcome.step3.consistent_for != outcome.step1_pos) {
    d.send = true;
    d.reasons.insert(TriggerReason::Step3Inconsistent);
  }
  if (outcome.step2.consistent_for.has_value() &&
      *outcome.step2.consistent_for != outcome.step1_pos) {
    d.send = true;
    d.reasons.insert(TriggerReason::Step2FavorsOther);
  }
  if (outcome.step2.consistent_for != outcome.step1_pos) {
    d.expect_receive = true;
    d.reasons.insert(TriggerReason::PeerWillSend);
  }
  return d;
}

HistoryLedger apply_comm(const HistoryLedger& ledger, const CommMessage& msg, CommDirection dir) {
  if (msg.payload.empty()) throw ProtocolError("empty communication payload");
  HistoryLedger out = ledger;
  if (dir == CommDirection::Outgoing) {
    for (const Observation& o : msg.payload) {
      const auto it = std::find(out.own_unshared.begin(), out.own_unshared.end(), o);
      if (it == out.own_unshared.end()) {
        throw ProtocolError("outgoing payload not found in own_unshared");
      }
      out.own_unshared.erase(it);
      if (!erase_slot(out.own_slots_as_seen_by_peer, o)) {
        throw ProtocolError("outgoing payload has no matching slot");
      }
      insert_sorted(out.common, o);
    }
  } else {
    for (const Observation& o : msg.payload) {
      if (!erase_slot(out.peer_missing_slots, o)) {
        throw ProtocolError("incoming payload does not match any missing slot");
      }
      insert_sorted(out.common, o);
    }
  }
  return out;
}

EnforceResult enforce(HistoryLedger& ledger_r, HistoryLedger& ledger_rp, const CellBelief& prior,
                      std::span<const JointAction> actions, const ObsModel& m, const Grid& grid,
                      Pose pose_r, Pose pose_rp, bool channel_open, std::size_t slot_cap) {
  EnforceResult result;
  HistoryLedger* ledgers[2] = {&ledger_r, &ledger_rp};

  const auto deliver = [&](int sender, TriggerReason why) {
    CommMessage msg{sender, ledgers[sender]->own_unshared, why};
    *ledgers[sender] = apply_comm(*ledgers[sender], msg, CommDirection::Outgoing);
    *ledgers[1 - sender] = apply_comm(*ledgers[1 - sender], msg, CommDirection::Incoming);
    result.comms += 1;
    result.delivered.push_back(std::move(msg));
  };
  const auto forced_outcome = [&]() {
    result.action_r = step1_pos(ledger_r, prior, actions, m, grid, pose_r, pose_rp);
    result.action_rp = step1_pos(ledger_rp, prior, actions, m, grid, pose_r, pose_rp);
    result.agreed = result.action_r == result.action_rp;
    result.forced = true;
    return result;
  };

  while (true) {
    // Oversized backlogs are shared up front so the realization spaces stay
    // enumerable on both sides.
    bool over_cap = false;
    for (int i = 0; i < 2; ++i) {
      if (ledgers[i]->own_unshared.size() > slot_cap) {
        if (!channel_open) return forced_outcome();
        deliver(i, TriggerReason::Step3Inconsistent);
        over_cap = true;
      }
    }
    if (over_cap) {
      result.rounds += 1;
      continue;
    }

    const VerifyOutcome out_r = verify(ledger_r, prior, actions, m, grid, pose_r, pose_rp,
                                       slot_cap);
    const VerifyOutcome out_rp = verify(ledger_rp, prior, actions, m, grid, pose_r, pose_rp,
                                        slot_cap);
    result.rounds += 1;
    if (out_r.mrac && out_rp.mrac) {
      result.action_r = out_r.step1_pos;
      result.action_rp = out_rp.step1_pos;
      result.agreed = true;
      return result;
    }

    const CommDecision dec_r = comm_decision(out_r);
    const CommDecision dec_rp = comm_decision(out_rp);
    const bool sendable_r = dec_r.send && !ledger_r.own_unshared.empty();
    const bool sendable_rp = dec_rp.send && !ledger_rp.own_unshared.empty();
    if (!channel_open || (!sendable_r && !sendable_rp)) {
      // Blocked channel, or no agent has anything useful to transmit.
      return forced_outcome();
    }
    if (sendable_r) deliver(0, *dec_r.reasons.begin());
    if (sendable_rp) deliver(1, *dec_rp.reasons.begin());
  }
}

}  // namespace mrac
