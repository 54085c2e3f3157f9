#include "mrac/runtime.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include "mrac/errors.hpp"

namespace mrac {

namespace {

struct SessionOutcome {
  std::size_t act_r = 0;
  std::size_t act_rp = 0;
  bool forced = false;
  int comms = 0;
  std::optional<GuaranteeTriple> triple_r;
  std::optional<std::pair<double, double>> bracket_r;
  std::uint64_t evals = 0;
};

/// Shared state of one planning session (one timestep).
struct SessionContext {
  HistoryLedger* ledgers[2];
  const CellBelief* prior;
  std::span<const JointAction> actions;
  const ObsModel* m;
  const Grid* grid;
  Pose pose_r;
  Pose pose_rp;
  bool open = false;
  int time = 0;
  Channel* channel = nullptr;
  std::size_t slot_cap = kDefaultSlotCap;

  int deliver(int sender) {
    CommMessage msg{sender, ledgers[sender]->own_unshared, TriggerReason::Step3Inconsistent};
    *ledgers[sender] = apply_comm(*ledgers[sender], msg, CommDirection::Outgoing);
    *ledgers[1 - sender] = apply_comm(*ledgers[1 - sender], msg, CommDirection::Incoming);
    channel->log.push_back({time, sender, msg.payload.size()});
    return 1;
  }

  std::size_t step1_of(int agent) {
    return step1_pos(*ledgers[agent], *prior, actions, *m, *grid, pose_r, pose_rp);
  }

  /// Backlogs beyond the enumeration cap are shared before verification; a
  /// blocked channel leaves only the step-1 fallback.
  enum class CapAction { Proceed, Shared, Blocked };
  CapAction enforce_cap(SessionOutcome& out) {
    bool shared = false;
    for (int i = 0; i < 2; ++i) {
      if (ledgers[i]->own_unshared.size() > slot_cap) {
        if (!open) return CapAction::Blocked;
        out.comms += deliver(i);
        shared = true;
      }
    }
    return shared ? CapAction::Shared : CapAction::Proceed;
  }

  SessionOutcome forced_outcome(SessionOutcome out) {
    out.act_r = step1_of(0);
    out.act_rp = step1_of(1);
    out.forced = true;
    return out;
  }
};

SessionOutcome baseline1_session(SessionContext& ctx) {
  SessionOutcome out;
  if (ctx.open) {
    out.comms += ctx.deliver(0);
    out.comms += ctx.deliver(1);
  } else {
    out.forced = true;
  }
  out.act_r = ctx.step1_of(0);
  out.act_rp = ctx.step1_of(1);
  return out;
}

SessionOutcome baseline2_session(SessionContext& ctx) {
  SessionOutcome out;
  out.act_r = ctx.step1_of(0);
  out.act_rp = ctx.step1_of(1);
  return out;
}

SessionOutcome enforce_session(SessionContext& ctx) {
  SessionOutcome out;
  EnforceResult res = enforce(*ctx.ledgers[0], *ctx.ledgers[1], *ctx.prior, ctx.actions, *ctx.m,
                              *ctx.grid, ctx.pose_r, ctx.pose_rp, ctx.open, ctx.slot_cap);
  for (const CommMessage& msg : res.delivered) {
    ctx.channel->log.push_back({ctx.time, msg.sender, msg.payload.size()});
  }
  out.act_r = res.action_r;
  out.act_rp = res.action_rp;
  out.forced = res.forced;
  out.comms = res.comms;
  if (res.agreed && !res.forced) out.triple_r = GuaranteeTriple{1.0, 0.0, 0.0};
  return out;
}

SessionOutcome relaxed_session(SessionContext& ctx, const AlgorithmSpec& spec) {
  SessionOutcome out;
  while (true) {
    switch (ctx.enforce_cap(out)) {
      case SessionContext::CapAction::Blocked: return ctx.forced_outcome(std::move(out));
      case SessionContext::CapAction::Shared: continue;
      case SessionContext::CapAction::Proceed: break;
    }
    const RVerifyOutcome o_r = r_verify(*ctx.ledgers[0], *ctx.prior, ctx.actions, *ctx.m,
                                        *ctx.grid, ctx.pose_r, ctx.pose_rp, spec.epsilon,
                                        ctx.slot_cap);
    const RVerifyOutcome o_rp = r_verify(*ctx.ledgers[1], *ctx.prior, ctx.actions, *ctx.m,
                                         *ctx.grid, ctx.pose_r, ctx.pose_rp, spec.epsilon,
                                         ctx.slot_cap);
    out.evals += o_r.evaluated_realizations + o_rp.evaluated_realizations;
    if (o_r.declared && o_rp.declared) {
      out.act_r = o_r.step1_pos;
      out.act_rp = o_rp.step1_pos;
      out.triple_r = o_r.triple;
      return out;
    }
    const bool send_r = !o_r.declared && !ctx.ledgers[0]->own_unshared.empty();
    const bool send_rp = !o_rp.declared && !ctx.ledgers[1]->own_unshared.empty();
    if (!ctx.open || (!send_r && !send_rp)) {
      out.act_r = o_r.step1_pos;
      out.act_rp = o_rp.step1_pos;
      out.forced = true;
      if (o_r.declared) out.triple_r = o_r.triple;
      return out;
    }
    if (send_r) out.comms += ctx.deliver(0);
    if (send_rp) out.comms += ctx.deliver(1);
  }
}

SessionOutcome simp_session(SessionContext& ctx, const AlgorithmSpec& spec) {
  SessionOutcome out;
  while (true) {
    switch (ctx.enforce_cap(out)) {
      case SessionContext::CapAction::Blocked: return ctx.forced_outcome(std::move(out));
      case SessionContext::CapAction::Shared: continue;
      case SessionContext::CapAction::Proceed: break;
    }
    const RVerifySimpOutcome o_r =
        r_verify_simp(*ctx.ledgers[0], *ctx.prior, ctx.actions, *ctx.m, *ctx.grid, ctx.pose_r,
                      ctx.pose_rp, spec.epsilon, spec.m_batch, spec.initial_fraction,
                      ctx.slot_cap);
    const RVerifySimpOutcome o_rp =
        r_verify_simp(*ctx.ledgers[1], *ctx.prior, ctx.actions, *ctx.m, *ctx.grid, ctx.pose_r,
                      ctx.pose_rp, spec.epsilon, spec.m_batch, spec.initial_fraction,
                      ctx.slot_cap);
    out.evals += o_r.evaluated_realizations + o_rp.evaluated_realizations;
    if (o_r.declared && o_rp.declared) {
      out.act_r = o_r.step1_pos;
      out.act_rp = o_rp.step1_pos;
      out.bracket_r = std::make_pair(o_r.cl_lb, o_r.cl_ub);
      return out;
    }
    const bool send_r = !o_r.declared && !ctx.ledgers[0]->own_unshared.empty();
    const bool send_rp = !o_rp.declared && !ctx.ledgers[1]->own_unshared.empty();
    if (!ctx.open || (!send_r && !send_rp)) {
      out.act_r = o_r.step1_pos;
      out.act_rp = o_rp.step1_pos;
      out.forced = true;
      if (o_r.declared) out.bracket_r = std::make_pair(o_r.cl_lb, o_r.cl_ub);
      return out;
    }
    if (send_r) out.comms += ctx.deliver(0);
    if (send_rp) out.comms += ctx.deliver(1);
  }
}

}  // namespace

std::string algorithm_name(AlgorithmKind kind) {
  switch (kind) {
    case AlgorithmKind::BaselineI: return "baseline1";
    case AlgorithmKind::BaselineII: return "baseline2";
    case AlgorithmKind::EnforceAC: return "enforce_ac";
    case AlgorithmKind::REnforceAC: return "r_enforce_ac";
    case AlgorithmKind::REnforceACSimp: return "r_enforce_ac_simp";
  }
  return "unknown";
}

std::optional<AlgorithmKind> algorithm_from_name(std::string_view name) {
  if (name == "baseline1") return AlgorithmKind::BaselineI;
  if (name == "baseline2") return AlgorithmKind::BaselineII;
  if (name == "enforce_ac") return AlgorithmKind::EnforceAC;
  if (name == "r_enforce_ac") return AlgorithmKind::REnforceAC;
  if (name == "r_enforce_ac_simp") return AlgorithmKind::REnforceACSimp;
  return std::nullopt;
}

void AlgorithmSpec::validate() const {
  if (kind == AlgorithmKind::REnforceAC || kind == AlgorithmKind::REnforceACSimp) {
    if (!(epsilon >= 0.0 && epsilon < 1.0)) throw InputError("epsilon must lie in [0, 1)");
  }
  if (m_batch < 1) throw InputError("m_batch must be positive");
  if (!(initial_fraction >= 0.0 && initial_fraction <= 1.0)) {
    throw InputError("initial_fraction must lie in [0, 1]");
  }
  if (slot_cap < 1) throw InputError("slot_cap must be positive");
  // 16^horizon joint actions; anything past 4 is outside this simulator's scale
  if (horizon < 1 || horizon > 4) throw InputError("horizon must lie in [1, 4]");
}

EpisodeMetrics run_episode(const Scenario& scenario, const AlgorithmSpec& spec) {
  spec.validate();
  const auto actions = enumerate_joint_actions(static_cast<std::size_t>(spec.horizon));

  Rng rng_prior(scenario.seed, 1);
  const CellBelief prior = init_prior(scenario.initialization, scenario.ground_truth, rng_prior);
  Rng rng_obs(scenario.seed, 2);

  EpisodeMetrics metrics;
  metrics.seed = scenario.seed;
  metrics.channel.restrictions = scenario.restrictions;
  metrics.steps.reserve(static_cast<std::size_t>(scenario.episode_length));

  HistoryLedger ledger_r;
  HistoryLedger ledger_rp;
  Pose pose_r = scenario.start_r;
  Pose pose_rp = scenario.start_rp;
  int last_consistent = 0;
  double j_sum = 0.0;

  for (int t = 1; t <= scenario.episode_length; ++t) {
    const auto started = std::chrono::steady_clock::now();

    const Observation z_r = sense(scenario, pose_r, 0, t, rng_obs);
    const Observation z_rp = sense(scenario, pose_rp, 1, t, rng_obs);
    ledger_r.own_unshared.push_back(z_r);
    ledger_r.own_slots_as_seen_by_peer.slots.push_back(ObsSlot{t, 0, z_r.cell});
    ledger_r.peer_missing_slots.slots.push_back(ObsSlot{t, 1, scenario.grid.cell_index(pose_rp)});
    ledger_rp.own_unshared.push_back(z_rp);
    ledger_rp.own_slots_as_seen_by_peer.slots.push_back(ObsSlot{t, 1, z_rp.cell});
    ledger_rp.peer_missing_slots.slots.push_back(ObsSlot{t, 0, scenario.grid.cell_index(pose_r)});

    SessionContext ctx{{&ledger_r, &ledger_rp},
                       &prior,
                       actions,
                       &scenario.sensor,
                       &scenario.grid,
                       pose_r,
                       pose_rp,
                       metrics.channel.open_at(t),
                       t,
                       &metrics.channel,
                       static_cast<std::size_t>(spec.slot_cap)};
    SessionOutcome session;
    switch (spec.kind) {
      case AlgorithmKind::BaselineI: session = baseline1_session(ctx); break;
      case AlgorithmKind::BaselineII: session = baseline2_session(ctx); break;
      case AlgorithmKind::EnforceAC: session = enforce_session(ctx); break;
      case AlgorithmKind::REnforceAC: session = relaxed_session(ctx, spec); break;
      case AlgorithmKind::REnforceACSimp: session = simp_session(ctx, spec); break;
    }

    StepRecord rec;
    rec.t = t;
    rec.p_r = t - last_consistent;
    rec.p_rp = rec.p_r;
    rec.action_r = action_label(actions[session.act_r]);
    rec.action_rp = action_label(actions[session.act_rp]);
    rec.not_ac = session.act_r != session.act_rp;
    rec.comms = session.comms;
    rec.forced = session.forced;
    rec.guarantee = session.triple_r;
    rec.cl_bracket = session.bracket_r;
    rec.evaluated_realizations = session.evals;
    rec.j_r = evaluate_objective(own_belief(ledger_r, prior, scenario.sensor),
                                 actions[session.act_r], scenario.sensor, scenario.grid, pose_r,
                                 pose_rp);
    rec.j_rp = evaluate_objective(own_belief(ledger_rp, prior, scenario.sensor),
                                  actions[session.act_rp], scenario.sensor, scenario.grid, pose_r,
                                  pose_rp);

    pose_r = move(pose_r, actions[session.act_r].robot_r[0], scenario.grid);
    pose_rp = move(pose_rp, actions[session.act_rp].robot_rp[0], scenario.grid);

    if (ledger_r.own_unshared.empty() && ledger_rp.own_unshared.empty()) {
      last_consistent = t;
      ledger_r.last_consistent_time = t;
      ledger_rp.last_consistent_time = t;
    }

    rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                            started)
                      .count();
    metrics.not_ac_count += rec.not_ac ? 1 : 0;
    metrics.comm_count += rec.comms;
    metrics.forced_steps += rec.forced ? 1 : 0;
    metrics.evaluated_realizations += rec.evaluated_realizations;
    metrics.wall_ms_total += rec.wall_ms;
    j_sum += rec.j_r;
    metrics.steps.push_back(std::move(rec));
  }
  metrics.mean_j_r = j_sum / static_cast<double>(scenario.episode_length);
  return metrics;
}

std::vector<EpisodeMetrics> run_batch(const ScenarioConfig& config, const AlgorithmSpec& spec,
                                      std::span<const std::uint64_t> seeds, int parallelism) {
  if (seeds.empty()) throw InputError("seed list must not be empty");
  spec.validate();
  std::vector<EpisodeMetrics> results(seeds.size());
  const auto hw = static_cast<int>(std::thread::hardware_concurrency());
  const int workers = std::max(1, std::min<int>(parallelism > 0 ? parallelism : hw,
                                                static_cast<int>(seeds.size())));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= seeds.size() || failed.load()) break;
        try {
          const Scenario scenario = build_scenario(config, seeds[i]);
          results[i] = run_episode(scenario, spec);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
          break;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failed.load()) std::rethrow_exception(failure);
  return results;
}

BatchAggregate aggregate(std::span<const EpisodeMetrics> runs) {
  BatchAggregate agg;
  agg.episodes = runs.size();
  if (runs.empty()) return agg;
  double sum_nac = 0, sum_comm = 0, sum_j = 0;
  for (const auto& r : runs) {
    sum_nac += r.not_ac_count;
    sum_comm += static_cast<double>(r.comm_count);
    sum_j += r.mean_j_r;
  }
  const auto n = static_cast<double>(runs.size());
  agg.mean_not_ac = sum_nac / n;
  agg.mean_comms = sum_comm / n;
  agg.mean_j_r = sum_j / n;
  double var_nac = 0, var_comm = 0, var_j = 0;
  for (const auto& r : runs) {
    var_nac += (r.not_ac_count - agg.mean_not_ac) * (r.not_ac_count - agg.mean_not_ac);
    var_comm += (static_cast<double>(r.comm_count) - agg.mean_comms) *
                (static_cast<double>(r.comm_count) - agg.mean_comms);
    var_j += (r.mean_j_r - agg.mean_j_r) * (r.mean_j_r - agg.mean_j_r);
  }
  agg.std_not_ac = std::sqrt(var_nac / n);
  agg.std_comms = std::sqrt(var_comm / n);
  agg.std_j_r = std::sqrt(var_j / n);
  return agg;
}

}  // namespace mrac
