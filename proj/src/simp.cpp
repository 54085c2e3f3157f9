#include "mrac/simp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mrac/errors.hpp"

namespace mrac {

namespace {

std::vector<ActionIndex> ordinals_of(std::span<const JointAction> actions) {
  std::vector<ActionIndex> ords(actions.size());
  for (std::size_t i = 0; i < actions.size(); ++i) ords[i] = action_ordinal(actions[i]);
  return ords;
}

/// Lazily evaluated realization cache for one space. Lower bounds are always
/// accumulated over the evaluated indices in ascending order, so a fully
/// covered cache reproduces the exact cumulative-likelihood table bit for
/// bit regardless of the order realizations were requested in.
class SpaceEvaluator {
 public:
  SpaceEvaluator(const CellBelief& common, const ObsSeqSpace& space,
                 std::span<const JointAction> actions, const ObsModel& m, const Grid& grid,
                 Pose pose_r, Pose pose_rp)
      : common_(common),
        space_(space),
        actions_(actions),
        m_(m),
        grid_(grid),
        pose_r_(pose_r),
        pose_rp_(pose_rp),
        cache_(space.realization_count()),
        done_(space.realization_count(), false) {}

  std::size_t total() const { return cache_.size(); }
  std::size_t evaluated_count() const { return evaluated_; }

  void ensure(std::uint32_t idx) {
    if (done_[idx]) return;
    cache_[idx] = evaluate_realization(common_, space_, idx, actions_, m_, grid_, pose_r_,
                                       pose_rp_);
    done_[idx] = true;
    evaluated_ += 1;
  }

  /// Adds up to `count` unevaluated realizations in canonical order.
  void grow(std::size_t count) {
    for (std::uint32_t idx = 0; idx < cache_.size() && count > 0; ++idx) {
      if (!done_[idx]) {
        ensure(idx);
        count -= 1;
      }
    }
  }

  bool fully_evaluated() const { return evaluated_ == cache_.size(); }

  std::vector<std::uint32_t> evaluated_indices() const {
    std::vector<std::uint32_t> out;
    out.reserve(evaluated_);
    for (std::uint32_t idx = 0; idx < cache_.size(); ++idx) {
      if (done_[idx]) out.push_back(idx);
    }
    return out;
  }

  void lower_bounds(std::span<double> lb) const {
    std::fill(lb.begin(), lb.end(), 0.0);
    for (std::uint32_t idx = 0; idx < cache_.size(); ++idx) {
      if (done_[idx]) lb[cache_[idx].favored_pos] += cache_[idx].likelihood;
    }
  }

 private:
  const CellBelief& common_;
  const ObsSeqSpace& space_;
  std::span<const JointAction> actions_;
  const ObsModel& m_;
  const Grid& grid_;
  Pose pose_r_;
  Pose pose_rp_;
  std::vector<RealizationEval> cache_;
  std::vector<bool> done_;
  std::size_t evaluated_ = 0;
};

void upper_bounds(std::span<const double> lb, std::span<double> ub) {
  double total = 0.0;
  for (double v : lb) total += v;
  for (std::size_t i = 0; i < lb.size(); ++i) ub[i] = 1.0 - (total - lb[i]);
}

bool separated(std::span<const double> lb, std::span<const double> ub, std::size_t a) {
  for (std::size_t i = 0; i < lb.size(); ++i) {
    if (i != a && !(lb[a] > ub[i] + kTieTolerance)) return false;
  }
  return true;
}

/// Decides one step's epsilon-MRAC disjunct (rank-1 or above-threshold) for
/// the step-1 action from partial bounds, growing the prefix until the
/// decision is certain. Every early exit is a sound certificate of the exact
/// decision; full coverage falls back to the exact table.
struct StepCertificate {
  bool disjunct = false;
  double lb = 0.0;
  double ub = 1.0;
  bool separated = false;
  bool rivals_below_threshold = false;
};

StepCertificate certify_step(SpaceEvaluator& eval, std::span<const ActionIndex> ords,
                             std::size_t a_bar, double epsilon, int m_batch,
                             double initial_fraction) {
  const std::size_t n = eval.total();
  const auto initial = static_cast<std::size_t>(
      std::ceil(initial_fraction * static_cast<double>(n)));
  eval.grow(std::clamp<std::size_t>(initial, 1, n));

  const std::size_t n_actions = ords.size();
  std::vector<double> lb(n_actions);
  std::vector<double> ub(n_actions);
  StepCertificate cert;
  while (true) {
    eval.lower_bounds(lb);
    upper_bounds(lb, ub);
    cert.lb = lb[a_bar];
    cert.ub = ub[a_bar];
    cert.separated = separated(lb, ub, a_bar);
    cert.rivals_below_threshold = true;
    for (std::size_t i = 0; i < n_actions; ++i) {
      if (i != a_bar && !(ub[i] <= 1.0 - epsilon)) cert.rivals_below_threshold = false;
    }

    if (lb[a_bar] > 1.0 - epsilon) {  // above-threshold branch certain
      cert.disjunct = true;
      return cert;
    }
    if (cert.separated) {  // rank-1 branch certain
      cert.disjunct = true;
      return cert;
    }
    if (ub[a_bar] <= 1.0 - epsilon) {  // threshold branch impossible
      bool dominated = false;
      for (std::size_t i = 0; i < n_actions; ++i) {
        if (i != a_bar && lb[i] > ub[a_bar] + kTieTolerance) dominated = true;
      }
      if (dominated) {  // rank-1 branch impossible too
        cert.disjunct = false;
        return cert;
      }
    }
    if (eval.fully_evaluated()) {
      // Bounds collapsed: decide exactly as the unsimplified verification.
      const std::size_t best = argmax_position(lb, ords);
      cert.disjunct = a_bar == best || lb[a_bar] > 1.0 - epsilon;
      return cert;
    }
    eval.grow(static_cast<std::size_t>(m_batch));
  }
}

}  // namespace

BoundsTable bounds_from_subset(const CellBelief& common, const ObsSeqSpace& space,
                               std::span<const std::uint32_t> subset,
                               std::span<const JointAction> actions, const ObsModel& m,
                               const Grid& grid, Pose pose_r, Pose pose_rp) {
  SpaceEvaluator eval(common, space, actions, m, grid, pose_r, pose_rp);
  for (std::uint32_t idx : subset) {
    if (idx >= space.realization_count()) {
      throw InputError("subset realization " + std::to_string(idx) + " outside the space");
    }
    eval.ensure(idx);
  }
  BoundsTable out;
  out.lb.resize(actions.size());
  out.ub.resize(actions.size());
  eval.lower_bounds(out.lb);
  upper_bounds(out.lb, out.ub);
  out.evaluated = eval.evaluated_indices();
  return out;
}

std::vector<std::size_t> prune(const BoundsTable& bounds) {
  std::vector<std::size_t> survivors;
  for (std::size_t a = 0; a < bounds.lb.size(); ++a) {
    bool dominated = false;
    for (std::size_t b = 0; b < bounds.lb.size(); ++b) {
      if (b != a && bounds.lb[b] > bounds.ub[a] + kTieTolerance) dominated = true;
    }
    if (!dominated) survivors.push_back(a);
  }
  return survivors;
}

std::size_t adaptive_bounds_pos(const CellBelief& common, const ObsSeqSpace& space,
                                std::span<const std::uint32_t> initial_subset, int m_batch,
                                std::span<const JointAction> actions, const ObsModel& m,
                                const Grid& grid, Pose pose_r, Pose pose_rp,
                                std::uint64_t* evaluated_count) {
  if (m_batch < 1) throw InputError("m_batch must be positive");
  SpaceEvaluator eval(common, space, actions, m, grid, pose_r, pose_rp);
  for (std::uint32_t idx : initial_subset) {
    if (idx >= space.realization_count()) throw InputError("initial subset outside the space");
    eval.ensure(idx);
  }
  const auto ords = ordinals_of(actions);
  std::vector<double> lb(actions.size());
  std::vector<double> ub(actions.size());
  while (true) {
    eval.lower_bounds(lb);
    upper_bounds(lb, ub);
    for (std::size_t a = 0; a < actions.size(); ++a) {
      if (separated(lb, ub, a)) {
        if (evaluated_count) *evaluated_count = eval.evaluated_count();
        return a;
      }
    }
    if (eval.fully_evaluated()) {
      // Exact ties never separate strictly; resolve by the shared rank rule.
      if (evaluated_count) *evaluated_count = eval.evaluated_count();
      return argmax_position(lb, ords);
    }
    eval.grow(static_cast<std::size_t>(m_batch));
  }
}

const JointAction& adaptive_bounds(const CellBelief& common, const ObsSeqSpace& space,
                                   std::span<const std::uint32_t> initial_subset, int m_batch,
                                   std::span<const JointAction> actions, const ObsModel& m,
                                   const Grid& grid, Pose pose_r, Pose pose_rp) {
  return actions[adaptive_bounds_pos(common, space, initial_subset, m_batch, actions, m, grid,
                                     pose_r, pose_rp)];
}

RVerifySimpOutcome r_verify_simp(const HistoryLedger& ledger, const CellBelief& prior,
                                 std::span<const JointAction> actions, const ObsModel& m,
                                 const Grid& grid, Pose pose_r, Pose pose_rp, double epsilon,
                                 int m_batch, double initial_fraction, std::size_t slot_cap) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw InputError("epsilon must lie in [0, 1)");
  if (m_batch < 1) throw InputError("m_batch must be positive");
  if (!(initial_fraction >= 0.0 && initial_fraction <= 1.0)) {
    throw InputError("initial_fraction must lie in [0, 1]");
  }
  for (const ObsSeqSpace* space : {&ledger.peer_missing_slots, &ledger.own_slots_as_seen_by_peer}) {
    if (space->slots.size() > slot_cap) {
      throw EnumerationLimitError("slot count " + std::to_string(space->slots.size()) +
                                  " exceeds enumeration cap " + std::to_string(slot_cap));
    }
  }

  RVerifySimpOutcome out;
  const CellBelief common = common_belief(ledger, prior, m);
  const CellBelief own = belief_from_history(common, ledger.own_unshared, m);
  out.step1_pos = best_action_pos(own, actions, m, grid, pose_r, pose_rp);

  const auto ords = ordinals_of(actions);
  SpaceEvaluator eval2(common, ledger.peer_missing_slots, actions, m, grid, pose_r, pose_rp);
  const StepCertificate c2 =
      certify_step(eval2, ords, out.step1_pos, epsilon, m_batch, initial_fraction);
  out.evaluated_realizations = eval2.evaluated_count();
  out.cl_lb = c2.lb;
  out.cl_ub = c2.ub;
  if (!c2.disjunct) {
    out.declared = false;
    return out;
  }
  SpaceEvaluator eval3(common, ledger.own_slots_as_seen_by_peer, actions, m, grid, pose_r,
                       pose_rp);
  const StepCertificate c3 =
      certify_step(eval3, ords, out.step1_pos, epsilon, m_batch, initial_fraction);
  out.evaluated_realizations += eval3.evaluated_count();
  out.declared = c3.disjunct;
  out.deterministic = c2.separated && c3.separated && c2.rivals_below_threshold &&
                      c3.rivals_below_threshold;
  return out;
}

}  // namespace mrac
