#include "mrac/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "mrac/errors.hpp"

namespace mrac {

StateSampleSet sample_states(const StateSampler& sampler, std::size_t n_samples, Rng& rng) {
  if (n_samples == 0) throw InputError("state sample count must be positive");
  StateSampleSet out;
  out.samples.reserve(n_samples);
  for (std::size_t s = 0; s < n_samples; ++s) out.samples.push_back(sampler(rng));
  return out;
}

double estimate_seq_likelihood(const StateSampleSet& samples, std::span<const double> seq,
                               const ObsLikelihoodFn& obs_likelihood) {
  if (samples.size() == 0) throw InputError("empty state sample set");
  double acc = 0.0;
  for (const auto& state : samples.samples) {
    if (state.size() != seq.size()) {
      throw InputError("observation sequence length does not match the sampled timesteps");
    }
    double prod = 1.0;
    for (std::size_t j = 0; j < seq.size(); ++j) prod *= obs_likelihood(seq[j], state[j]);
    acc += prod;
  }
  return acc / static_cast<double>(samples.size());
}

std::size_t ObsSampleSet::total() const {
  std::size_t n = 0;
  for (const auto& per_state : sequences) n += per_state.size();
  return n;
}

ObsSampleSet sample_observations(const StateSampleSet& states, const ObsSamplerFn& obs_sampler,
                                 std::size_t n_z, Rng& rng) {
  if (n_z == 0) throw InputError("observation sample count must be positive");
  ObsSampleSet out;
  out.sequences.reserve(states.size());
  for (const auto& state : states.samples) {
    std::vector<std::vector<double>> draws(n_z);
    for (auto& seq : draws) {
      seq.resize(state.size());
      for (std::size_t j = 0; j < state.size(); ++j) seq[j] = obs_sampler(state[j], rng);
    }
    out.sequences.push_back(std::move(draws));
  }
  return out;
}

EstimatedClTable estimate_cumulative_likelihood(
    const ObsSampleSet& samples, const std::function<std::size_t(std::span<const double>)>& favored,
    std::span<const JointAction> actions) {
  EstimatedClTable table;
  table.counts.assign(actions.size(), 0);
  for (const auto& per_state : samples.sequences) {
    for (const auto& seq : per_state) {
      const std::size_t pos = favored(seq);
      if (pos >= actions.size()) throw InputError("favored action outside the action span");
      table.counts[pos] += 1;
      table.total += 1;
    }
  }
  if (table.total == 0) throw InputError("empty observation sample set");
  table.values.resize(actions.size());
  for (std::size_t i = 0; i < actions.size(); ++i) {
    table.values[i] = static_cast<double>(table.counts[i]) / static_cast<double>(table.total);
  }
  std::vector<ActionIndex> ords(actions.size());
  for (std::size_t i = 0; i < actions.size(); ++i) ords[i] = action_ordinal(actions[i]);
  table.best = argmax_position(table.values, ords);
  return table;
}

std::pair<double, double> hoeffding_interval(double estimate, std::size_t n, double delta) {
  if (n == 0) throw InputError("sample count must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw InputError("delta must lie in (0, 1)");
  const double half_width = std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(n)));
  return {std::max(0.0, estimate - half_width), std::min(1.0, estimate + half_width)};
}

StateSampler make_cell_state_sampler(const CellBelief& belief, std::vector<ObsSlot> slots) {
  for (const ObsSlot& s : slots) {
    if (s.cell < 0 || static_cast<std::size_t>(s.cell) >= belief.size()) {
      throw InputError("slot cell outside the belief");
    }
  }
  return [belief, slots = std::move(slots)](Rng& rng) {
    // One Bernoulli draw per distinct cell; repeated visits see the same state.
    std::map<int, double> drawn;
    std::vector<double> state(slots.size());
    for (std::size_t j = 0; j < slots.size(); ++j) {
      const auto it = drawn.find(slots[j].cell);
      if (it != drawn.end()) {
        state[j] = it->second;
      } else {
        const double value =
            rng.bernoulli(belief.prob(static_cast<std::size_t>(slots[j].cell))) ? 1.0 : 0.0;
        drawn.emplace(slots[j].cell, value);
        state[j] = value;
      }
    }
    return state;
  };
}

ObsLikelihoodFn make_detector_likelihood(const ObsModel& m) {
  return [m](double z, double x) {
    const double p_one = x != 0.0 ? m.p_detect : m.p_false_alarm;
    return z != 0.0 ? p_one : 1.0 - p_one;
  };
}

ObsSamplerFn make_detector_sampler(const ObsModel& m) {
  return [m](double x, Rng& rng) {
    const double p_one = x != 0.0 ? m.p_detect : m.p_false_alarm;
    return rng.bernoulli(p_one) ? 1.0 : 0.0;
  };
}

}  // namespace mrac
