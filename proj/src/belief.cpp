#include "mrac/belief.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "mrac/errors.hpp"

namespace mrac {

namespace {

double clamp_prob(double p) { return std::clamp(p, kProbFloor, 1.0 - kProbFloor); }

void check_cell(const CellBelief& b, int cell) {
  if (cell < 0 || static_cast<std::size_t>(cell) >= b.size()) {
    throw InputError("observation cell " + std::to_string(cell) + " outside belief of size " +
                     std::to_string(b.size()));
  }
}

}  // namespace

CellBelief::CellBelief(std::vector<double> probs) : probs_(std::move(probs)) {
  for (double p : probs_) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw InputError("cell marginal " + std::to_string(p) + " outside [0, 1]");
    }
  }
}

CellBelief CellBelief::constant(std::size_t cells, double p) {
  return CellBelief(std::vector<double>(cells, p));
}

double CellBelief::prob(std::size_t cell) const {
  if (cell >= probs_.size()) throw InputError("cell index out of range");
  return probs_[cell];
}

void CellBelief::set_prob(std::size_t cell, double p) {
  if (cell >= probs_.size()) throw InputError("cell index out of range");
  if (!(p >= 0.0 && p <= 1.0)) throw InputError("cell marginal outside [0, 1]");
  probs_[cell] = p;
}

double bernoulli_entropy_term(double p) {
  double acc = 0.0;
  if (p > 0.0) acc += p * std::log(p);
  if (p < 1.0) acc += (1.0 - p) * std::log(1.0 - p);
  return acc;
}

double evidence_prob(double prior, int z, const ObsModel& m) {
  const double p1 = m.p_detect * prior + m.p_false_alarm * (1.0 - prior);
  return z ? p1 : 1.0 - p1;
}

double posterior_prob(double prior, int z, const ObsModel& m) {
  const double like_occ = z ? m.p_detect : 1.0 - m.p_detect;
  const double like_empty = z ? m.p_false_alarm : 1.0 - m.p_false_alarm;
  const double num = like_occ * prior;
  const double den = num + like_empty * (1.0 - prior);
  if (den == 0.0) {
    throw DegenerateEvidenceError("zero-probability observation under a degenerate prior");
  }
  return clamp_prob(num / den);
}

double prior_prob(double posterior, int z, const ObsModel& m) {
  const double like_occ = z ? m.p_detect : 1.0 - m.p_detect;
  const double like_empty = z ? m.p_false_alarm : 1.0 - m.p_false_alarm;
  // Solve posterior = like_occ*q / (like_occ*q + like_empty*(1-q)) for q.
  const double den = like_occ - posterior * (like_occ - like_empty);
  const double q = posterior * like_empty / den;
  if (!(den > 0.0) || !std::isfinite(q) || q < 0.0 || q > 1.0) {
    throw InconsistentLedgerError("down-date is inconsistent with the recorded observation");
  }
  return clamp_prob(q);
}

CellBelief bayes_update(const CellBelief& b, const Observation& o, const ObsModel& m) {
  check_cell(b, o.cell);
  CellBelief out = b;
  out.set_prob(static_cast<std::size_t>(o.cell),
               posterior_prob(b.prob(static_cast<std::size_t>(o.cell)), o.value, m));
  return out;
}

CellBelief bayes_downdate(const CellBelief& b, const Observation& o, const ObsModel& m) {
  check_cell(b, o.cell);
  CellBelief out = b;
  out.set_prob(static_cast<std::size_t>(o.cell),
               prior_prob(b.prob(static_cast<std::size_t>(o.cell)), o.value, m));
  return out;
}

double entropy_reward(const CellBelief& b) {
  double acc = 0.0;
  for (double p : b.probs()) acc += bernoulli_entropy_term(p);
  return acc;
}

double observation_likelihood(const CellBelief& b, std::span<const Observation> seq,
                              const ObsModel& m) {
  CellBelief running = b;
  double like = 1.0;
  for (const Observation& o : seq) {
    check_cell(running, o.cell);
    const double q = running.prob(static_cast<std::size_t>(o.cell));
    const double pz = evidence_prob(q, o.value, m);
    like *= pz;
    if (pz == 0.0) return 0.0;  // impossible sequence; no posterior to chain
    running.set_prob(static_cast<std::size_t>(o.cell), posterior_prob(q, o.value, m));
  }
  return like;
}

CellBelief belief_from_history(const CellBelief& prior, std::span<const Observation> seq,
                               const ObsModel& m) {
  CellBelief out = prior;
  for (const Observation& o : seq) {
    check_cell(out, o.cell);
    const auto cell = static_cast<std::size_t>(o.cell);
    out.set_prob(cell, posterior_prob(out.prob(cell), o.value, m));
  }
  return out;
}

}  // namespace mrac
