#include "mrac/planning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mrac/errors.hpp"

namespace mrac {

namespace {

/// View of a base belief with a handful of modified marginals. Conditional
/// beliefs in steps 2/3 differ from the common belief only on slot cells, so
/// a short mod list beats copying the whole belief in the enumeration loops.
class BeliefOverlay {
 public:
  explicit BeliefOverlay(const CellBelief& base) : base_(&base) {}

  double prob(int cell) const {
    for (auto it = mods_.rbegin(); it != mods_.rend(); ++it) {
      if (it->first == cell) return it->second;
    }
    return base_->prob(static_cast<std::size_t>(cell));
  }

  void set(int cell, double p) { mods_.emplace_back(cell, p); }

  std::size_t mark() const { return mods_.size(); }
  void rewind(std::size_t mark) { mods_.resize(mark); }

 private:
  const CellBelief* base_;
  std::vector<std::pair<int, double>> mods_;
};

/// Expected change of the observed cell's entropy term after one reading.
double expected_entropy_gain(double q, const ObsModel& m) {
  const double base = bernoulli_entropy_term(q);
  double acc = 0.0;
  for (int z = 0; z < 2; ++z) {
    const double pz = evidence_prob(q, z, m);
    if (pz == 0.0) continue;
    acc += pz * (bernoulli_entropy_term(posterior_prob(q, z, m)) - base);
  }
  return acc;
}

/// Same-cell variant: both robots read the cell within one step, chained.
double expected_entropy_gain_twice(double q, const ObsModel& m) {
  const double base = bernoulli_entropy_term(q);
  double acc = 0.0;
  for (int z1 = 0; z1 < 2; ++z1) {
    const double p1 = evidence_prob(q, z1, m);
    if (p1 == 0.0) continue;
    const double q1 = posterior_prob(q, z1, m);
    for (int z2 = 0; z2 < 2; ++z2) {
      const double p2 = evidence_prob(q1, z2, m);
      if (p2 == 0.0) continue;
      acc += p1 * p2 * (bernoulli_entropy_term(posterior_prob(q1, z2, m)) - base);
    }
  }
  return acc;
}

/// Recursive exact expectation of the cumulative entropy-term deltas over all
/// binary joint observations of the remaining steps. `delta_so_far` tracks
/// rho(belief) - rho(initial belief) along the branch.
double gain_recursive(BeliefOverlay& overlay, const JointAction& a, const ObsModel& m,
                      const Grid& grid, Pose pose_r, Pose pose_rp, std::size_t step,
                      double delta_so_far) {
  if (step == a.horizon()) return 0.0;
  const Pose next_r = move(pose_r, a.robot_r[step], grid);
  const Pose next_rp = move(pose_rp, a.robot_rp[step], grid);
  const int cell_r = grid.cell_index(next_r);
  const int cell_rp = grid.cell_index(next_rp);

  double acc = 0.0;
  for (int z1 = 0; z1 < 2; ++z1) {
    const double q1 = overlay.prob(cell_r);
    const double p1 = evidence_prob(q1, z1, m);
    if (p1 == 0.0) continue;
    const std::size_t mark1 = overlay.mark();
    const double post1 = posterior_prob(q1, z1, m);
    double d1 = delta_so_far + bernoulli_entropy_term(post1) - bernoulli_entropy_term(q1);
    overlay.set(cell_r, post1);
    for (int z2 = 0; z2 < 2; ++z2) {
      const double q2 = overlay.prob(cell_rp);
      const double p2 = evidence_prob(q2, z2, m);
      if (p2 == 0.0) continue;
      const std::size_t mark2 = overlay.mark();
      const double post2 = posterior_prob(q2, z2, m);
      const double d2 = d1 + bernoulli_entropy_term(post2) - bernoulli_entropy_term(q2);
      overlay.set(cell_rp, post2);
      const double w = p1 * p2;
      acc += w * d2;
      acc += w * gain_recursive(overlay, a, m, grid, next_r, next_rp, step + 1, d2);
      overlay.rewind(mark2);
    }
    overlay.rewind(mark1);
  }
  return acc;
}

double action_gain(BeliefOverlay& overlay, const JointAction& a, const ObsModel& m,
                   const Grid& grid, Pose pose_r, Pose pose_rp) {
  return gain_recursive(overlay, a, m, grid, pose_r, pose_rp, 0, 0.0);
}

/// Gains for every action of a horizon-1 span, sharing the per-side
/// per-primitive terms. Bitwise-stable: the same arithmetic is used for every
/// realization, so symmetric situations tie exactly.
void horizon1_gains(const BeliefOverlay& overlay, std::span<const JointAction> actions,
                    const ObsModel& m, const Grid& grid, Pose pose_r, Pose pose_rp,
                    std::span<double> out) {
  int cell_r[4];
  int cell_rp[4];
  double term_r[4];
  double term_rp[4];
  for (int i = 0; i < 4; ++i) {
    cell_r[i] = grid.cell_index(move(pose_r, kAllPrimitives[static_cast<std::size_t>(i)], grid));
    cell_rp[i] = grid.cell_index(move(pose_rp, kAllPrimitives[static_cast<std::size_t>(i)], grid));
    term_r[i] = expected_entropy_gain(overlay.prob(cell_r[i]), m);
    term_rp[i] = expected_entropy_gain(overlay.prob(cell_rp[i]), m);
  }
  for (std::size_t k = 0; k < actions.size(); ++k) {
    const int i = static_cast<int>(actions[k].robot_r[0]);
    const int j = static_cast<int>(actions[k].robot_rp[0]);
    out[k] = cell_r[i] == cell_rp[j] ? expected_entropy_gain_twice(overlay.prob(cell_r[i]), m)
                                     : term_r[i] + term_rp[j];
  }
}

void action_gains(BeliefOverlay& overlay, std::span<const JointAction> actions, const ObsModel& m,
                  const Grid& grid, Pose pose_r, Pose pose_rp, std::span<double> out) {
  if (!actions.empty() && actions.front().horizon() == 1) {
    horizon1_gains(overlay, actions, m, grid, pose_r, pose_rp, out);
    return;
  }
  for (std::size_t k = 0; k < actions.size(); ++k) {
    out[k] = action_gain(overlay, actions[k], m, grid, pose_r, pose_rp);
  }
}

std::vector<ActionIndex> ordinals_of(std::span<const JointAction> actions) {
  std::vector<ActionIndex> ords(actions.size());
  for (std::size_t i = 0; i < actions.size(); ++i) ords[i] = action_ordinal(actions[i]);
  return ords;
}

void check_actions(std::span<const JointAction> actions) {
  if (actions.empty()) throw InputError("empty joint-action set");
  const std::size_t horizon = actions.front().horizon();
  if (horizon == 0) throw InputError("joint action with empty horizon");
  for (const auto& a : actions) {
    if (a.robot_r.size() != horizon || a.robot_rp.size() != horizon) {
      throw InputError("joint actions must share one horizon for both robots");
    }
  }
}

void check_poses(const Grid& grid, Pose pose_r, Pose pose_rp) {
  if (!grid.contains(pose_r) || !grid.contains(pose_rp)) {
    throw InputError("planning pose outside the grid");
  }
}

void check_cap(const ObsSeqSpace& space, std::size_t slot_cap) {
  if (space.slots.size() > slot_cap) {
    throw EnumerationLimitError("slot count " + std::to_string(space.slots.size()) +
                                " exceeds enumeration cap " + std::to_string(slot_cap));
  }
}

/// Applies one realization to the overlay, returning its chain-rule
/// likelihood under the base belief.
double apply_realization(BeliefOverlay& overlay, const ObsSeqSpace& space,
                         std::uint32_t realization, const ObsModel& m) {
  double like = 1.0;
  for (std::size_t j = 0; j < space.slots.size(); ++j) {
    const int cell = space.slots[j].cell;
    const int z = space.slot_value(realization, j);
    const double q = overlay.prob(cell);
    const double pz = evidence_prob(q, z, m);
    like *= pz;
    if (pz == 0.0) return 0.0;  // impossible realization; keep belief as-is
    overlay.set(cell, posterior_prob(q, z, m));
  }
  return like;
}

}  // namespace

ActionIndex action_ordinal(const JointAction& a) {
  ActionIndex ord = 0;
  for (std::size_t l = 0; l < a.horizon(); ++l) {
    ord = ord * 16 +
          static_cast<ActionIndex>(4 * static_cast<int>(a.robot_r[l]) +
                                   static_cast<int>(a.robot_rp[l]));
  }
  return ord;
}

std::vector<JointAction> enumerate_joint_actions(std::size_t horizon) {
  if (horizon == 0) throw InputError("horizon must be at least 1");
  std::size_t total = 1;
  for (std::size_t l = 0; l < horizon; ++l) total *= 16;
  std::vector<JointAction> actions(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    JointAction a;
    a.robot_r.resize(horizon);
    a.robot_rp.resize(horizon);
    std::size_t rest = idx;
    for (std::size_t l = horizon; l-- > 0;) {
      const std::size_t digit = rest % 16;
      rest /= 16;
      a.robot_r[l] = static_cast<MotionPrimitive>(digit / 4);
      a.robot_rp[l] = static_cast<MotionPrimitive>(digit % 4);
    }
    actions[idx] = std::move(a);
  }
  return actions;
}

std::string action_label(const JointAction& a) {
  std::string out;
  out.reserve(2 * a.horizon() + 1);
  for (auto p : a.robot_r) out.push_back(primitive_letter(p));
  out.push_back(':');
  for (auto p : a.robot_rp) out.push_back(primitive_letter(p));
  return out;
}

std::optional<JointAction> action_from_label(std::string_view label) {
  const auto sep = label.find(':');
  if (sep == std::string_view::npos || sep == 0 || sep + 1 == label.size()) return std::nullopt;
  if (label.size() != 2 * sep + 1) return std::nullopt;
  JointAction a;
  for (std::size_t i = 0; i < sep; ++i) {
    const auto p = primitive_from_letter(label[i]);
    const auto q = primitive_from_letter(label[sep + 1 + i]);
    if (!p || !q) return std::nullopt;
    a.robot_r.push_back(*p);
    a.robot_rp.push_back(*q);
  }
  return a;
}

int ObsSeqSpace::slot_value(std::uint32_t realization, std::size_t slot) const {
  return static_cast<int>((realization >> (slots.size() - 1 - slot)) & 1u);
}

std::vector<Observation> ObsSeqSpace::realize(std::uint32_t realization) const {
  std::vector<Observation> out(slots.size());
  for (std::size_t j = 0; j < slots.size(); ++j) {
    out[j] = Observation{slots[j].time, slots[j].robot, slots[j].cell, slot_value(realization, j)};
  }
  return out;
}

double evaluate_objective(const CellBelief& b, const JointAction& a, const ObsModel& m,
                          const Grid& grid, Pose pose_r, Pose pose_rp) {
  check_actions(std::span<const JointAction>(&a, 1));
  check_poses(grid, pose_r, pose_rp);
  BeliefOverlay overlay(b);
  const double gain = action_gain(overlay, a, m, grid, pose_r, pose_rp);
  return static_cast<double>(a.horizon()) * entropy_reward(b) + gain;
}

std::size_t argmax_position(std::span<const double> values,
                            std::span<const ActionIndex> ordinals) {
  if (values.empty() || values.size() != ordinals.size()) {
    throw InputError("argmax over empty or mismatched spans");
  }
  double vmax = -std::numeric_limits<double>::infinity();
  for (double v : values) vmax = std::max(vmax, v);
  std::size_t best = values.size();
  ActionIndex best_ord = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] >= vmax - kTieTolerance) {
      if (best == values.size() || ordinals[i] < best_ord) {
        best = i;
        best_ord = ordinals[i];
      }
    }
  }
  return best;
}

std::size_t best_action_pos(const CellBelief& b, std::span<const JointAction> actions,
                            const ObsModel& m, const Grid& grid, Pose pose_r, Pose pose_rp) {
  check_actions(actions);
  check_poses(grid, pose_r, pose_rp);
  BeliefOverlay overlay(b);
  std::vector<double> gains(actions.size());
  action_gains(overlay, actions, m, grid, pose_r, pose_rp, gains);
  const auto ords = ordinals_of(actions);
  return argmax_position(gains, ords);
}

const JointAction& best_action(const CellBelief& b, std::span<const JointAction> actions,
                               const ObsModel& m, const Grid& grid, Pose pose_r, Pose pose_rp) {
  return actions[best_action_pos(b, actions, m, grid, pose_r, pose_rp)];
}

RealizationEval evaluate_realization(const CellBelief& common, const ObsSeqSpace& space,
                                     std::uint32_t realization,
                                     std::span<const JointAction> actions, const ObsModel& m,
                                     const Grid& grid, Pose pose_r, Pose pose_rp) {
  check_actions(actions);
  check_poses(grid, pose_r, pose_rp);
  if (realization >= space.realization_count()) throw InputError("realization index out of range");
  BeliefOverlay overlay(common);
  const double like = apply_realization(overlay, space, realization, m);
  std::vector<double> gains(actions.size());
  action_gains(overlay, actions, m, grid, pose_r, pose_rp, gains);
  const auto ords = ordinals_of(actions);
  return RealizationEval{argmax_position(gains, ords), like};
}

std::size_t favored_action_pos(const CellBelief& common, const ObsSeqSpace& space,
                               std::uint32_t realization, std::span<const JointAction> actions,
                               const ObsModel& m, const Grid& grid, Pose pose_r, Pose pose_rp) {
  return evaluate_realization(common, space, realization, actions, m, grid, pose_r, pose_rp)
      .favored_pos;
}

const JointAction& favored_action(const CellBelief& common, const ObsSeqSpace& space,
                                  std::uint32_t realization, std::span<const JointAction> actions,
                                  const ObsModel& m, const Grid& grid, Pose pose_r, Pose pose_rp) {
  return actions[favored_action_pos(common, space, realization, actions, m, grid, pose_r,
                                    pose_rp)];
}

ConsistencySets consistent_obs_sets(const CellBelief& common, const ObsSeqSpace& space,
                                    std::span<const JointAction> actions, const ObsModel& m,
                                    const Grid& grid, Pose pose_r, Pose pose_rp,
                                    std::size_t slot_cap) {
  check_actions(actions);
  check_poses(grid, pose_r, pose_rp);
  check_cap(space, slot_cap);
  ConsistencySets out;
  out.realizations_by_action.resize(actions.size());

  const auto ords = ordinals_of(actions);
  std::vector<double> gains(actions.size());
  const std::size_t n = space.realization_count();
  for (std::uint32_t idx = 0; idx < n; ++idx) {
    BeliefOverlay overlay(common);
    apply_realization(overlay, space, idx, m);
    action_gains(overlay, actions, m, grid, pose_r, pose_rp, gains);
    out.realizations_by_action[argmax_position(gains, ords)].push_back(idx);
  }
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (out.realizations_by_action[i].size() == n) {
      out.consistent_for = i;
      break;
    }
  }
  return out;
}

}  // namespace mrac
