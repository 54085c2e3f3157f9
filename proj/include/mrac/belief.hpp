#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mrac {

/// Binary detector: P(z=1 | occupied) and P(z=1 | empty). Informative when
/// p_detect > p_false_alarm; an uninformative sensor (equal rates) leaves
/// every posterior equal to its prior.
struct ObsModel {
  double p_detect = 0.9;
  double p_false_alarm = 0.2;

  bool informative() const { return p_detect != p_false_alarm; }
};

/// One binary observation of a single grid cell by one robot. The cell is
/// derived from the robot's (known) pose at `time`.
struct Observation {
  int time = 0;
  int robot = 0;
  int cell = 0;
  int value = 0;

  bool operator==(const Observation&) const = default;
};

/// Marginals are clamped into [kProbFloor, 1 - kProbFloor] after every update
/// so the ratio-form down-date stays well-posed.
inline constexpr double kProbFloor = 1e-12;

/// Factored Bernoulli occupancy belief: one independent marginal per cell.
/// Beliefs are immutable values in practice; all operations below return new
/// instances and never mutate their input.
class CellBelief {
 public:
  CellBelief() = default;
  explicit CellBelief(std::vector<double> probs);

  /// Belief with every cell at probability p.
  static CellBelief constant(std::size_t cells, double p);

  std::size_t size() const { return probs_.size(); }
  double prob(std::size_t cell) const;
  void set_prob(std::size_t cell, double p);
  std::span<const double> probs() const { return probs_; }

  bool operator==(const CellBelief&) const = default;

 private:
  std::vector<double> probs_;
};

/// p*ln(p) + (1-p)*ln(1-p), with the 0*ln(0) := 0 convention. Always <= 0.
double bernoulli_entropy_term(double p);

/// Single-cell Bayes posterior for marginal `prior` and observation z.
/// Throws DegenerateEvidenceError when the evidence probability is zero.
double posterior_prob(double prior, int z, const ObsModel& m);

/// Inverse of posterior_prob: recovers the prior that produced `posterior`
/// under observation z. Throws InconsistentLedgerError when no valid prior
/// exists.
double prior_prob(double posterior, int z, const ObsModel& m);

/// P(z) for a cell with the given occupancy marginal.
double evidence_prob(double prior, int z, const ObsModel& m);

/// Bayes update of the observed cell's marginal; all other cells unchanged.
CellBelief bayes_update(const CellBelief& b, const Observation& o, const ObsModel& m);

/// Exact inverse of bayes_update (within 1e-12 per cell).
CellBelief bayes_downdate(const CellBelief& b, const Observation& o, const ObsModel& m);

/// Sum over cells of bernoulli_entropy_term; in [-X*ln(2), 0] for X cells.
double entropy_reward(const CellBelief& b);

/// Exact likelihood of an observation sequence by per-cell marginalization.
/// Repeated visits to the same cell are handled by sequential update between
/// factors (chain rule), so likelihoods over a fixed slot list sum to one.
double observation_likelihood(const CellBelief& b, std::span<const Observation> seq,
                              const ObsModel& m);

/// Fold of bayes_update over a time-ordered observation sequence.
CellBelief belief_from_history(const CellBelief& prior, std::span<const Observation> seq,
                               const ObsModel& m);

}  // namespace mrac
