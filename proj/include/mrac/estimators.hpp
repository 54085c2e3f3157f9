#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "mrac/belief.hpp"
#include "mrac/planning.hpp"
#include "mrac/rng.hpp"

namespace mrac {

/// Joint state samples at the missing-observation timesteps, one vector of
/// per-slot state values per sample. Works for any belief that can be
/// sampled jointly, discrete or continuous.
struct StateSampleSet {
  std::vector<std::vector<double>> samples;  // [sample][slot]

  std::size_t size() const { return samples.size(); }
};

/// Draws one joint state realization at the requested timesteps.
using StateSampler = std::function<std::vector<double>(Rng&)>;

/// Density or mass of one observation given the state it was taken in.
using ObsLikelihoodFn = std::function<double(double z, double x)>;

/// Draws one observation from the model conditioned on a state value.
using ObsSamplerFn = std::function<double(double x, Rng&)>;

StateSampleSet sample_states(const StateSampler& sampler, std::size_t n_samples, Rng& rng);

/// Monte-Carlo estimate of an observation-sequence likelihood: the mean over
/// state samples of the per-slot likelihood product.
double estimate_seq_likelihood(const StateSampleSet& samples, std::span<const double> seq,
                               const ObsLikelihoodFn& obs_likelihood);

/// N_Z observation-sequence samples per state sample.
struct ObsSampleSet {
  std::vector<std::vector<std::vector<double>>> sequences;  // [sample][draw][slot]

  std::size_t total() const;
};

ObsSampleSet sample_observations(const StateSampleSet& states, const ObsSamplerFn& obs_sampler,
                                 std::size_t n_z, Rng& rng);

/// Sampled cumulative-likelihood table: per-action ratio of observation
/// samples favoring that action. Counts are kept alongside the ratios so the
/// partition identity (counts sum to the total) stays exact.
struct EstimatedClTable {
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;
  std::vector<double> values;
  std::size_t best = 0;
};

EstimatedClTable estimate_cumulative_likelihood(
    const ObsSampleSet& samples, const std::function<std::size_t(std::span<const double>)>& favored,
    std::span<const JointAction> actions);

/// Two-sided Hoeffding interval for a [0,1]-bounded mean estimate:
/// half-width sqrt(ln(2/delta) / (2n)), clipped to [0, 1].
std::pair<double, double> hoeffding_interval(double estimate, std::size_t n, double delta);

/// Joint sampler for a factored Bernoulli belief at the slots' cells. Slots
/// sharing a cell share the sampled state within each draw.
StateSampler make_cell_state_sampler(const CellBelief& belief, std::vector<ObsSlot> slots);

/// Binary-detector adapters for the sampled estimators.
ObsLikelihoodFn make_detector_likelihood(const ObsModel& m);
ObsSamplerFn make_detector_sampler(const ObsModel& m);

}  // namespace mrac
