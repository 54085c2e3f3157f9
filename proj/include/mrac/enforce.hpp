#pragma once

#include <set>
#include <span>
#include <vector>

#include "mrac/verify.hpp"

namespace mrac {

enum class TriggerReason { Step3Inconsistent, Step2FavorsOther, PeerWillSend };

/// One one-way transmission: the sender's entire unshared backlog.
struct CommMessage {
  int sender = 0;
  std::vector<Observation> payload;
  TriggerReason trigger = TriggerReason::Step3Inconsistent;
};

struct CommDecision {
  bool send = false;
  bool expect_receive = false;
  std::set<TriggerReason> reasons;
};

/// Self-trigger conditions after a failed verification. Send when step 3 is
/// not consistent in favor of the step-1 action, or when step 2 is consistent
/// in favor of a different action; expect an incoming message when step 2 is
/// not consistent in favor of the step-1 action.
CommDecision comm_decision(const VerifyOutcome& outcome);

enum class CommDirection { Outgoing, Incoming };

/// Ledger update after a transmission. Outgoing payloads move from
/// own_unshared into common (shrinking the peer-facing slot space); incoming
/// payloads fill peer_missing_slots and join common.
HistoryLedger apply_comm(const HistoryLedger& ledger, const CommMessage& msg, CommDirection dir);

struct EnforceResult {
  std::size_t action_r = 0;   // position into the actions span
  std::size_t action_rp = 0;
  bool agreed = false;        // verification succeeded on both sides
  bool forced = false;        // a required comm was blocked; step-1 fallback
  int comms = 0;              // delivered one-way transmissions
  int rounds = 0;
  std::vector<CommMessage> delivered;
};

/// Repeats verification and self-triggered communication until both agents
/// certify the same joint action or everything is shared. A blocked channel
/// yields a forced decision (each agent's own step-1 action) instead of an
/// error. Backlogs larger than `slot_cap` force a share before verification,
/// keeping the enumeration bounded.
EnforceResult enforce(HistoryLedger& ledger_r, HistoryLedger& ledger_rp, const CellBelief& prior,
                      std::span<const JointAction> actions, const ObsModel& m, const Grid& grid,
                      Pose pose_r, Pose pose_rp, bool channel_open,
                      std::size_t slot_cap = kDefaultSlotCap);

}  // namespace mrac
