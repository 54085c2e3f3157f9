#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mrac/config.hpp"
#include "mrac/errors.hpp"
#include "mrac/estimators.hpp"
#include "mrac/output.hpp"
#include "mrac/runtime.hpp"

namespace py = pybind11;
using namespace mrac;

namespace {

// span-taking core functions get vector shims for python callers
std::vector<JointAction> as_actions(const std::vector<JointAction>& a) { return a; }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Decentralized two-robot belief-space planning with action-consistency checks";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<DegenerateEvidenceError>(m, "DegenerateEvidenceError", PyExc_ValueError);
  py::register_exception<InconsistentLedgerError>(m, "InconsistentLedgerError",
                                                  PyExc_RuntimeError);
  py::register_exception<EnumerationLimitError>(m, "EnumerationLimitError", PyExc_RuntimeError);
  py::register_exception<ProtocolError>(m, "ProtocolError", PyExc_RuntimeError);
  py::register_exception<ContractError>(m, "ContractError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<Rng>(m, "Rng")
      .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("seed"), py::arg("stream") = 0)
      .def("next_double", &Rng::next_double)
      .def("bernoulli", &Rng::bernoulli)
      .def("gaussian", &Rng::gaussian);

  py::class_<ObsModel>(m, "ObsModel")
      .def(py::init([](double p_detect, double p_false_alarm) {
             return ObsModel{p_detect, p_false_alarm};
           }),
           py::arg("p_detect") = 0.9, py::arg("p_false_alarm") = 0.2)
      .def_readwrite("p_detect", &ObsModel::p_detect)
      .def_readwrite("p_false_alarm", &ObsModel::p_false_alarm)
      .def("informative", &ObsModel::informative);

  py::class_<Observation>(m, "Observation")
      .def(py::init([](int time, int robot, int cell, int value) {
             return Observation{time, robot, cell, value};
           }),
           py::arg("time"), py::arg("robot"), py::arg("cell"), py::arg("value"))
      .def_readwrite("time", &Observation::time)
      .def_readwrite("robot", &Observation::robot)
      .def_readwrite("cell", &Observation::cell)
      .def_readwrite("value", &Observation::value)
      .def("__eq__", [](const Observation& a, const Observation& b) { return a == b; });

  py::class_<CellBelief>(m, "CellBelief")
      .def(py::init<std::vector<double>>(), py::arg("probs"))
      .def_static("constant", &CellBelief::constant, py::arg("cells"), py::arg("p"))
      .def("__len__", &CellBelief::size)
      .def("prob", &CellBelief::prob, py::arg("cell"))
      .def("probs",
           [](const CellBelief& b) {
             return std::vector<double>(b.probs().begin(), b.probs().end());
           })
      .def("__eq__", [](const CellBelief& a, const CellBelief& b) { return a == b; });

  m.def("bayes_update", &bayes_update, py::arg("belief"), py::arg("observation"),
        py::arg("model"));
  m.def("bayes_downdate", &bayes_downdate, py::arg("belief"), py::arg("observation"),
        py::arg("model"));
  m.def("entropy_reward", &entropy_reward, py::arg("belief"));
  m.def(
      "observation_likelihood",
      [](const CellBelief& b, const std::vector<Observation>& seq, const ObsModel& m_) {
        return observation_likelihood(b, seq, m_);
      },
      py::arg("belief"), py::arg("sequence"), py::arg("model"));
  m.def(
      "belief_from_history",
      [](const CellBelief& prior, const std::vector<Observation>& seq, const ObsModel& m_) {
        return belief_from_history(prior, seq, m_);
      },
      py::arg("prior"), py::arg("sequence"), py::arg("model"));

  py::enum_<MotionPrimitive>(m, "MotionPrimitive")
      .value("North", MotionPrimitive::North)
      .value("South", MotionPrimitive::South)
      .value("East", MotionPrimitive::East)
      .value("West", MotionPrimitive::West);

  py::class_<Pose>(m, "Pose")
      .def(py::init([](int row, int col) { return Pose{row, col}; }), py::arg("row"),
           py::arg("col"))
      .def_readwrite("row", &Pose::row)
      .def_readwrite("col", &Pose::col)
      .def("__eq__", [](const Pose& a, const Pose& b) { return a == b; })
      .def("__repr__", [](const Pose& p) {
        return "Pose(" + std::to_string(p.row) + ", " + std::to_string(p.col) + ")";
      });

  py::class_<Grid>(m, "Grid")
      .def(py::init([](int width, int height) { return Grid{width, height}; }), py::arg("width"),
           py::arg("height"))
      .def_readwrite("width", &Grid::width)
      .def_readwrite("height", &Grid::height)
      .def("cell_count", &Grid::cell_count)
      .def("contains", &Grid::contains)
      .def("cell_index", &Grid::cell_index);

  m.def("move", &move, py::arg("pose"), py::arg("primitive"), py::arg("grid"));

  py::enum_<InitKind>(m, "InitKind")
      .value("MaxEntropy", InitKind::MaxEntropy)
      .value("PriorKnowledge", InitKind::PriorKnowledge)
      .value("Random", InitKind::Random);

  py::class_<ScenarioConfig>(m, "ScenarioConfig")
      .def(py::init<>())
      .def_readwrite("width", &ScenarioConfig::width)
      .def_readwrite("height", &ScenarioConfig::height)
      .def_readwrite("target_density", &ScenarioConfig::target_density)
      .def_readwrite("episode_length", &ScenarioConfig::episode_length)
      .def_readwrite("comm_restrictions", &ScenarioConfig::comm_restrictions)
      .def_readwrite("initialization", &ScenarioConfig::initialization)
      .def_readwrite("start_r", &ScenarioConfig::start_r)
      .def_readwrite("start_rp", &ScenarioConfig::start_rp)
      .def_readwrite("sensor", &ScenarioConfig::sensor);

  py::class_<Scenario>(m, "Scenario")
      .def_readonly("grid", &Scenario::grid)
      .def_readonly("ground_truth", &Scenario::ground_truth)
      .def_readonly("start_r", &Scenario::start_r)
      .def_readonly("start_rp", &Scenario::start_rp)
      .def_readonly("episode_length", &Scenario::episode_length)
      .def_readonly("restrictions", &Scenario::restrictions)
      .def_readonly("sensor", &Scenario::sensor)
      .def_readonly("seed", &Scenario::seed);

  m.def("build_scenario", &build_scenario, py::arg("config"), py::arg("seed"));
  m.def(
      "init_prior",
      [](InitKind kind, const std::vector<std::uint8_t>& truth, Rng& rng) {
        return init_prior(kind, truth, rng);
      },
      py::arg("kind"), py::arg("ground_truth"), py::arg("rng"));
  m.def("sense", &sense, py::arg("scenario"), py::arg("pose"), py::arg("robot"), py::arg("time"),
        py::arg("rng"));

  py::class_<JointAction>(m, "JointAction")
      .def(py::init([](std::vector<MotionPrimitive> r, std::vector<MotionPrimitive> rp) {
             return JointAction{std::move(r), std::move(rp)};
           }),
           py::arg("robot_r"), py::arg("robot_rp"))
      .def_readwrite("robot_r", &JointAction::robot_r)
      .def_readwrite("robot_rp", &JointAction::robot_rp)
      .def("horizon", &JointAction::horizon)
      .def("__eq__", [](const JointAction& a, const JointAction& b) { return a == b; })
      .def("__repr__", [](const JointAction& a) { return action_label(a); });

  m.def("action_ordinal", &action_ordinal);
  m.def("enumerate_joint_actions", &enumerate_joint_actions, py::arg("horizon") = 1);
  m.def("action_label", &action_label);
  m.def("action_from_label",
        [](const std::string& s) { return action_from_label(s); });

  py::class_<ObsSlot>(m, "ObsSlot")
      .def(py::init([](int time, int robot, int cell) { return ObsSlot{time, robot, cell}; }),
           py::arg("time"), py::arg("robot"), py::arg("cell"))
      .def_readwrite("time", &ObsSlot::time)
      .def_readwrite("robot", &ObsSlot::robot)
      .def_readwrite("cell", &ObsSlot::cell);

  py::class_<ObsSeqSpace>(m, "ObsSeqSpace")
      .def(py::init([](std::vector<ObsSlot> slots) { return ObsSeqSpace{std::move(slots)}; }),
           py::arg("slots") = std::vector<ObsSlot>{})
      .def_readwrite("slots", &ObsSeqSpace::slots)
      .def("realization_count", &ObsSeqSpace::realization_count)
      .def("realize", &ObsSeqSpace::realize, py::arg("realization"));

  m.def(
      "evaluate_objective",
      [](const CellBelief& b, const JointAction& a, const ObsModel& m_, const Grid& g, Pose pr,
         Pose prp) { return evaluate_objective(b, a, m_, g, pr, prp); },
      py::arg("belief"), py::arg("action"), py::arg("model"), py::arg("grid"), py::arg("pose_r"),
      py::arg("pose_rp"));
  m.def(
      "best_action_pos",
      [](const CellBelief& b, const std::vector<JointAction>& actions, const ObsModel& m_,
         const Grid& g, Pose pr, Pose prp) {
        return best_action_pos(b, as_actions(actions), m_, g, pr, prp);
      },
      py::arg("belief"), py::arg("actions"), py::arg("model"), py::arg("grid"), py::arg("pose_r"),
      py::arg("pose_rp"));
  m.def(
      "favored_action_pos",
      [](const CellBelief& common, const ObsSeqSpace& space, std::uint32_t realization,
         const std::vector<JointAction>& actions, const ObsModel& m_, const Grid& g, Pose pr,
         Pose prp) {
        return favored_action_pos(common, space, realization, as_actions(actions), m_, g, pr,
                                  prp);
      },
      py::arg("common"), py::arg("space"), py::arg("realization"), py::arg("actions"),
      py::arg("model"), py::arg("grid"), py::arg("pose_r"), py::arg("pose_rp"));

  py::class_<ConsistencySets>(m, "ConsistencySets")
      .def_readonly("realizations_by_action", &ConsistencySets::realizations_by_action)
      .def_readonly("consistent_for", &ConsistencySets::consistent_for);

  m.def(
      "consistent_obs_sets",
      [](const CellBelief& common, const ObsSeqSpace& space,
         const std::vector<JointAction>& actions, const ObsModel& m_, const Grid& g, Pose pr,
         Pose prp, std::size_t slot_cap) {
        return consistent_obs_sets(common, space, as_actions(actions), m_, g, pr, prp, slot_cap);
      },
      py::arg("common"), py::arg("space"), py::arg("actions"), py::arg("model"), py::arg("grid"),
      py::arg("pose_r"), py::arg("pose_rp"), py::arg("slot_cap") = kDefaultSlotCap);

  py::class_<HistoryLedger>(m, "HistoryLedger")
      .def(py::init<>())
      .def_readwrite("common", &HistoryLedger::common)
      .def_readwrite("own_unshared", &HistoryLedger::own_unshared)
      .def_readwrite("peer_missing_slots", &HistoryLedger::peer_missing_slots)
      .def_readwrite("own_slots_as_seen_by_peer", &HistoryLedger::own_slots_as_seen_by_peer)
      .def_readwrite("last_consistent_time", &HistoryLedger::last_consistent_time)
      .def("validate", &HistoryLedger::validate);

  py::class_<VerifyOutcome>(m, "VerifyOutcome")
      .def_readonly("step1_pos", &VerifyOutcome::step1_pos)
      .def_readonly("step2", &VerifyOutcome::step2)
      .def_readonly("step3", &VerifyOutcome::step3)
      .def_readonly("mrac", &VerifyOutcome::mrac);

  m.def(
      "verify",
      [](const HistoryLedger& ledger, const CellBelief& prior,
         const std::vector<JointAction>& actions, const ObsModel& m_, const Grid& g, Pose pr,
         Pose prp, std::size_t slot_cap) {
        return verify(ledger, prior, as_actions(actions), m_, g, pr, prp, slot_cap);
      },
      py::arg("ledger"), py::arg("prior"), py::arg("actions"), py::arg("model"), py::arg("grid"),
      py::arg("pose_r"), py::arg("pose_rp"), py::arg("slot_cap") = kDefaultSlotCap);

  py::enum_<TriggerReason>(m, "TriggerReason")
      .value("Step3Inconsistent", TriggerReason::Step3Inconsistent)
      .value("Step2FavorsOther", TriggerReason::Step2FavorsOther)
      .value("PeerWillSend", TriggerReason::PeerWillSend);

  py::class_<CommDecision>(m, "CommDecision")
      .def_readonly("send", &CommDecision::send)
      .def_readonly("expect_receive", &CommDecision::expect_receive)
      .def_readonly("reasons", &CommDecision::reasons);

  m.def("comm_decision", &comm_decision, py::arg("outcome"));

  py::class_<EnforceResult>(m, "EnforceResult")
      .def_readonly("action_r", &EnforceResult::action_r)
      .def_readonly("action_rp", &EnforceResult::action_rp)
      .def_readonly("agreed", &EnforceResult::agreed)
      .def_readonly("forced", &EnforceResult::forced)
      .def_readonly("comms", &EnforceResult::comms)
      .def_readonly("rounds", &EnforceResult::rounds);

  m.def(
      "enforce",
      [](HistoryLedger ledger_r, HistoryLedger ledger_rp, const CellBelief& prior,
         const std::vector<JointAction>& actions, const ObsModel& m_, const Grid& g, Pose pr,
         Pose prp, bool channel_open, std::size_t slot_cap) {
        const EnforceResult res = enforce(ledger_r, ledger_rp, prior, as_actions(actions), m_, g,
                                          pr, prp, channel_open, slot_cap);
        return py::make_tuple(res, ledger_r, ledger_rp);
      },
      py::arg("ledger_r"), py::arg("ledger_rp"), py::arg("prior"), py::arg("actions"),
      py::arg("model"), py::arg("grid"), py::arg("pose_r"), py::arg("pose_rp"),
      py::arg("channel_open") = true, py::arg("slot_cap") = kDefaultSlotCap,
      "Runs the verification/communication loop; returns (result, ledger_r, ledger_rp).");

  py::class_<CumulativeLikelihoodTable>(m, "CumulativeLikelihoodTable")
      .def_readonly("values", &CumulativeLikelihoodTable::values)
      .def_readonly("best", &CumulativeLikelihoodTable::best);

  py::class_<GuaranteeTriple>(m, "GuaranteeTriple")
      .def_readonly("p_ac", &GuaranteeTriple::p_ac)
      .def_readonly("p_not_ac", &GuaranteeTriple::p_not_ac)
      .def_readonly("p_comm_from_peer", &GuaranteeTriple::p_comm_from_peer);

  m.def(
      "cumulative_likelihood",
      [](const CellBelief& common, const ObsSeqSpace& space,
         const std::vector<JointAction>& actions, const ObsModel& m_, const Grid& g, Pose pr,
         Pose prp, std::size_t slot_cap) {
        return cumulative_likelihood(common, space, as_actions(actions), m_, g, pr, prp,
                                     slot_cap);
      },
      py::arg("common"), py::arg("space"), py::arg("actions"), py::arg("model"), py::arg("grid"),
      py::arg("pose_r"), py::arg("pose_rp"), py::arg("slot_cap") = kDefaultSlotCap);
  m.def("epsilon_mrac", &epsilon_mrac, py::arg("step2"), py::arg("step3"), py::arg("action_pos"),
        py::arg("epsilon"));
  m.def("guarantees", &guarantees, py::arg("step2"), py::arg("step3"), py::arg("action_pos"),
        py::arg("epsilon"));

  py::class_<RVerifyOutcome>(m, "RVerifyOutcome")
      .def_readonly("declared", &RVerifyOutcome::declared)
      .def_readonly("step1_pos", &RVerifyOutcome::step1_pos)
      .def_readonly("triple", &RVerifyOutcome::triple)
      .def_readonly("step2", &RVerifyOutcome::step2)
      .def_readonly("step3", &RVerifyOutcome::step3)
      .def_readonly("evaluated_realizations", &RVerifyOutcome::evaluated_realizations);

  m.def(
      "r_verify",
      [](const HistoryLedger& ledger, const CellBelief& prior,
         const std::vector<JointAction>& actions, const ObsModel& m_, const Grid& g, Pose pr,
         Pose prp, double epsilon, std::size_t slot_cap) {
        return r_verify(ledger, prior, as_actions(actions), m_, g, pr, prp, epsilon, slot_cap);
      },
      py::arg("ledger"), py::arg("prior"), py::arg("actions"), py::arg("model"), py::arg("grid"),
      py::arg("pose_r"), py::arg("pose_rp"), py::arg("epsilon"),
      py::arg("slot_cap") = kDefaultSlotCap);

  py::class_<BoundsTable>(m, "BoundsTable")
      .def_readonly("lb", &BoundsTable::lb)
      .def_readonly("ub", &BoundsTable::ub)
      .def_readonly("evaluated", &BoundsTable::evaluated);

  m.def(
      "bounds_from_subset",
      [](const CellBelief& common, const ObsSeqSpace& space,
         const std::vector<std::uint32_t>& subset, const std::vector<JointAction>& actions,
         const ObsModel& m_, const Grid& g, Pose pr, Pose prp) {
        return bounds_from_subset(common, space, subset, as_actions(actions), m_, g, pr, prp);
      },
      py::arg("common"), py::arg("space"), py::arg("subset"), py::arg("actions"),
      py::arg("model"), py::arg("grid"), py::arg("pose_r"), py::arg("pose_rp"));
  m.def("prune", &prune, py::arg("bounds"));
  m.def(
      "adaptive_bounds_pos",
      [](const CellBelief& common, const ObsSeqSpace& space,
         const std::vector<std::uint32_t>& initial_subset, int m_batch,
         const std::vector<JointAction>& actions, const ObsModel& m_, const Grid& g, Pose pr,
         Pose prp) {
        return adaptive_bounds_pos(common, space, initial_subset, m_batch, as_actions(actions),
                                   m_, g, pr, prp);
      },
      py::arg("common"), py::arg("space"), py::arg("initial_subset"), py::arg("m_batch"),
      py::arg("actions"), py::arg("model"), py::arg("grid"), py::arg("pose_r"),
      py::arg("pose_rp"));

  py::class_<RVerifySimpOutcome>(m, "RVerifySimpOutcome")
      .def_readonly("declared", &RVerifySimpOutcome::declared)
      .def_readonly("step1_pos", &RVerifySimpOutcome::step1_pos)
      .def_readonly("cl_lb", &RVerifySimpOutcome::cl_lb)
      .def_readonly("cl_ub", &RVerifySimpOutcome::cl_ub)
      .def_readonly("deterministic", &RVerifySimpOutcome::deterministic)
      .def_readonly("evaluated_realizations", &RVerifySimpOutcome::evaluated_realizations);

  m.def(
      "r_verify_simp",
      [](const HistoryLedger& ledger, const CellBelief& prior,
         const std::vector<JointAction>& actions, const ObsModel& m_, const Grid& g, Pose pr,
         Pose prp, double epsilon, int m_batch, double initial_fraction, std::size_t slot_cap) {
        return r_verify_simp(ledger, prior, as_actions(actions), m_, g, pr, prp, epsilon,
                             m_batch, initial_fraction, slot_cap);
      },
      py::arg("ledger"), py::arg("prior"), py::arg("actions"), py::arg("model"), py::arg("grid"),
      py::arg("pose_r"), py::arg("pose_rp"), py::arg("epsilon"), py::arg("m_batch") = 4,
      py::arg("initial_fraction") = 0.25, py::arg("slot_cap") = kDefaultSlotCap);

  m.def("hoeffding_interval", &hoeffding_interval, py::arg("estimate"), py::arg("n"),
        py::arg("delta"));

  py::enum_<AlgorithmKind>(m, "AlgorithmKind")
      .value("BaselineI", AlgorithmKind::BaselineI)
      .value("BaselineII", AlgorithmKind::BaselineII)
      .value("EnforceAC", AlgorithmKind::EnforceAC)
      .value("REnforceAC", AlgorithmKind::REnforceAC)
      .value("REnforceACSimp", AlgorithmKind::REnforceACSimp);

  py::class_<AlgorithmSpec>(m, "AlgorithmSpec")
      .def(py::init<>())
      .def_readwrite("kind", &AlgorithmSpec::kind)
      .def_readwrite("epsilon", &AlgorithmSpec::epsilon)
      .def_readwrite("m_batch", &AlgorithmSpec::m_batch)
      .def_readwrite("initial_fraction", &AlgorithmSpec::initial_fraction)
      .def_readwrite("slot_cap", &AlgorithmSpec::slot_cap)
      .def_readwrite("horizon", &AlgorithmSpec::horizon);

  py::class_<StepRecord>(m, "StepRecord")
      .def_readonly("t", &StepRecord::t)
      .def_readonly("action_r", &StepRecord::action_r)
      .def_readonly("action_rp", &StepRecord::action_rp)
      .def_readonly("not_ac", &StepRecord::not_ac)
      .def_readonly("comms", &StepRecord::comms)
      .def_readonly("j_r", &StepRecord::j_r)
      .def_readonly("j_rp", &StepRecord::j_rp)
      .def_readonly("p_r", &StepRecord::p_r)
      .def_readonly("p_rp", &StepRecord::p_rp)
      .def_readonly("forced", &StepRecord::forced)
      .def_readonly("guarantee", &StepRecord::guarantee)
      .def_readonly("cl_bracket", &StepRecord::cl_bracket)
      .def_readonly("evaluated_realizations", &StepRecord::evaluated_realizations);

  py::class_<EpisodeMetrics>(m, "EpisodeMetrics")
      .def_readonly("seed", &EpisodeMetrics::seed)
      .def_readonly("steps", &EpisodeMetrics::steps)
      .def_readonly("not_ac_count", &EpisodeMetrics::not_ac_count)
      .def_readonly("comm_count", &EpisodeMetrics::comm_count)
      .def_readonly("forced_steps", &EpisodeMetrics::forced_steps)
      .def_readonly("evaluated_realizations", &EpisodeMetrics::evaluated_realizations)
      .def_readonly("mean_j_r", &EpisodeMetrics::mean_j_r);

  py::class_<BatchAggregate>(m, "BatchAggregate")
      .def_readonly("episodes", &BatchAggregate::episodes)
      .def_readonly("mean_not_ac", &BatchAggregate::mean_not_ac)
      .def_readonly("std_not_ac", &BatchAggregate::std_not_ac)
      .def_readonly("mean_comms", &BatchAggregate::mean_comms)
      .def_readonly("std_comms", &BatchAggregate::std_comms)
      .def_readonly("mean_j_r", &BatchAggregate::mean_j_r)
      .def_readonly("std_j_r", &BatchAggregate::std_j_r);

  m.def("run_episode", &run_episode, py::arg("scenario"), py::arg("spec"));
  m.def(
      "run_batch",
      [](const ScenarioConfig& config, const AlgorithmSpec& spec,
         const std::vector<std::uint64_t>& seeds, int parallelism) {
        return run_batch(config, spec, seeds, parallelism);
      },
      py::arg("config"), py::arg("spec"), py::arg("seeds"), py::arg("parallelism") = 0);
  m.def(
      "aggregate",
      [](const std::vector<EpisodeMetrics>& runs) { return aggregate(runs); },
      py::arg("runs"));
}
