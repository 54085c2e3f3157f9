#include "mrac/relaxed.hpp"

#include <string>

#include "mrac/errors.hpp"

namespace mrac {

namespace {

void check_epsilon(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) {
    throw InputError("epsilon must lie in [0, 1); got " + std::to_string(epsilon));
  }
}

std::vector<ActionIndex> ordinals_of(std::span<const JointAction> actions) {
  std::vector<ActionIndex> ords(actions.size());
  for (std::size_t i = 0; i < actions.size(); ++i) ords[i] = action_ordinal(actions[i]);
  return ords;
}

}  // namespace

CumulativeLikelihoodTable cumulative_likelihood(const CellBelief& common,
                                                const ObsSeqSpace& space,
                                                std::span<const JointAction> actions,
                                                const ObsModel& m, const Grid& grid, Pose pose_r,
                                                Pose pose_rp, std::size_t slot_cap) {
  if (space.slots.size() > slot_cap) {
    throw EnumerationLimitError("slot count " + std::to_string(space.slots.size()) +
                                " exceeds enumeration cap " + std::to_string(slot_cap));
  }
  CumulativeLikelihoodTable table;
  table.values.assign(actions.size(), 0.0);
  const std::size_t n = space.realization_count();
  for (std::uint32_t idx = 0; idx < n; ++idx) {
    const RealizationEval ev =
        evaluate_realization(common, space, idx, actions, m, grid, pose_r, pose_rp);
    table.values[ev.favored_pos] += ev.likelihood;
  }
  const auto ords = ordinals_of(actions);
  table.best = argmax_position(table.values, ords);
  return table;
}

CumulativeLikelihoodTable table_from_partition(const ConsistencySets& sets,
                                               std::span<const double> likelihoods,
                                               std::span<const JointAction> actions) {
  CumulativeLikelihoodTable table;
  table.values.assign(sets.realizations_by_action.size(), 0.0);
  for (std::size_t a = 0; a < sets.realizations_by_action.size(); ++a) {
    for (std::uint32_t idx : sets.realizations_by_action[a]) {
      table.values[a] += likelihoods[idx];
    }
  }
  const auto ords = ordinals_of(actions);
  table.best = argmax_position(table.values, ords);
  return table;
}

bool epsilon_mrac(const CumulativeLikelihoodTable& s2, const CumulativeLikelihoodTable& s3,
                  std::size_t action_pos, double epsilon) {
  check_epsilon(epsilon);
  if (action_pos >= s2.values.size() || action_pos >= s3.values.size()) {
    throw InputError("action position outside the cumulative-likelihood tables");
  }
  const bool step2_ok = action_pos == s2.best || s2.values[action_pos] > 1.0 - epsilon;
  const bool step3_ok = action_pos == s3.best || s3.values[action_pos] > 1.0 - epsilon;
  return step2_ok && step3_ok;
}

GuaranteeTriple guarantees(const CumulativeLikelihoodTable& s2,
                           const CumulativeLikelihoodTable& s3, std::size_t action_pos,
                           double epsilon) {
  if (!epsilon_mrac(s2, s3, action_pos, epsilon)) {
    throw ContractError("guarantees requested for an action that fails epsilon-MRAC");
  }
  GuaranteeTriple t;
  t.p_ac = s2.values[action_pos];
  for (std::size_t a = 0; a < s2.values.size(); ++a) {
    if (a == action_pos) continue;
    if (epsilon_mrac(s2, s3, a, epsilon)) {
      t.p_not_ac += s2.values[a];
    } else {
      t.p_comm_from_peer += s2.values[a];
    }
  }
  return t;
}

RVerifyOutcome r_verify(const HistoryLedger& ledger, const CellBelief& prior,
                        std::span<const JointAction> actions, const ObsModel& m, const Grid& grid,
                        Pose pose_r, Pose pose_rp, double epsilon, std::size_t slot_cap) {
  check_epsilon(epsilon);
  RVerifyOutcome out;
  const CellBelief common = common_belief(ledger, prior, m);
  const CellBelief own = belief_from_history(common, ledger.own_unshared, m);
  out.step1_pos = best_action_pos(own, actions, m, grid, pose_r, pose_rp);
  out.step2 = cumulative_likelihood(common, ledger.peer_missing_slots, actions, m, grid, pose_r,
                                    pose_rp, slot_cap);
  out.step3 = cumulative_likelihood(common, ledger.own_slots_as_seen_by_peer, actions, m, grid,
                                    pose_r, pose_rp, slot_cap);
  out.evaluated_realizations = ledger.peer_missing_slots.realization_count() +
                               ledger.own_slots_as_seen_by_peer.realization_count();
  out.declared = epsilon_mrac(out.step2, out.step3, out.step1_pos, epsilon);
  if (out.declared) {
    out.triple = guarantees(out.step2, out.step3, out.step1_pos, epsilon);
  }
  return out;
}

}  // namespace mrac
