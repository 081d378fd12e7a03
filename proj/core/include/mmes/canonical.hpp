// Copyright 2026 The mmes Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mmes/theory.hpp"

namespace mmes {

// Metropolis sampling of the law exp(-beta H) on the unit sphere.
struct CanonicalConfig {
  double beta = 0.0;
  // Total Monte Carlo steps per chain, burn-in included.
  std::size_t steps = 100'000;
  std::size_t burn_in = 10'000;
  std::size_t thin = 1;
  double step_size = 0.1;
  // Robbins-Monro tuning of step_size toward target_acceptance, burn-in only.
  bool adapt = true;
  double target_acceptance = 0.35;
  std::uint64_t seed = 0;
  std::size_t chains = 1;
  unsigned threads = 0;  // 0 = default_threads()

  // Throws ValidationError when an invariant is violated.
  void validate() const;
};

struct EnergySamples {
  std::vector<double> energies;
  std::vector<std::size_t> steps;  // chain step at which each energy was recorded
  double acceptance_rate = 1.0;    // over the recorded phase
  double step_size = 0.0;          // proposal scale after adaptation
  double beta = 0.0;
  int n = 0;
  std::uint64_t seed = 0;
  std::size_t chain = 0;
  std::string warning;

  std::size_t size() const noexcept { return energies.size(); }
};

// Acceptance rates below this after adaptation produce a warning.
inline constexpr double kLowAcceptance = 0.01;

EnergySamples metropolis_chain(int n, const CanonicalConfig& config, std::size_t chain_index = 0);
// config.chains independent chains, run in parallel; result i is chain i.
std::vector<EnergySamples> metropolis_chains(int n, const CanonicalConfig& config);

// Independent uniformly random states; sample i uses RNG stream i of `seed`.
// Equivalent to a beta = 0 chain without autocorrelation.
EnergySamples typical_samples(int n, std::size_t count, std::uint64_t seed, unsigned threads = 0);

// Same as typical_samples but recording the purity of one fixed bipartition.
EnergySamples typical_purities(int n, std::uint64_t mask, std::size_t count, std::uint64_t seed,
                               unsigned threads = 0);

// Concatenation of several chains at the same beta.
EnergySamples pool(std::span<const EnergySamples> chains);

struct MeanEstimate {
  double mean = 0.0;
  double se = 0.0;   // batch means, sqrt(size) batches
  double ess = 0.0;  // variance / se^2, capped at the sample count
};

MeanEstimate mean_estimate(std::span<const double> series);

struct ReweightOptions {
  double min_ess = 10.0;
  HistogramOptions histogram;
};

// Reweighted estimate of the canonical law at a new beta.
struct Reweighted {
  double beta = 0.0;
  std::vector<double> log_weights;  // relative to the sampled law, unnormalized
  double mean = 0.0;
  double se = 0.0;
  double ess = 0.0;  // (sum w)^2 / sum w^2
  Histogram histogram;
};

// Importance weights w_i ~ exp(-(beta - beta0) E_i), beta0 = samples.beta.
// Throws DegenerateWeightsError when ESS < options.min_ess.
Reweighted reweight(const EnergySamples& samples, double beta, const ReweightOptions& options = {});
// Further reweighting of an already reweighted estimate: weights compose
// multiplicatively, so returning to samples.beta restores unit weights.
Reweighted reweight(const Reweighted& prior, const EnergySamples& samples, double beta,
                    const ReweightOptions& options = {});

struct ScanRow {
  double beta = 0.0;
  double mean = 0.0;
  double se = 0.0;
  double acceptance = 0.0;
};

// One set of config.chains chains per beta; rows sorted by beta. Chains are
// seeded by their position in the sorted list, so the result does not depend
// on input order or thread count.
std::vector<ScanRow> mean_energy_scan(int n, std::span<const double> betas,
                                      const CanonicalConfig& config);

struct CumulantEstimate {
  int order = 0;
  double value = 0.0;
  double se = 0.0;
};

// Unbiased k-statistics k1..k_max_order (max_order <= 4) with delete-one-batch
// jackknife errors over sqrt(size) contiguous batches. Requires an effective
// sample size of 100 for orders <= 2 and 10^4 for orders 3 and 4.
std::vector<CumulantEstimate> cumulants(std::span<const double> series, int max_order);
std::vector<CumulantEstimate> cumulants(const EnergySamples& samples, int max_order);

// CSV with header "step,E".
void write_samples_csv(const EnergySamples& samples, std::ostream& out);
EnergySamples read_samples_csv(std::istream& in);
// {"beta", "n", "seed", "chains", "samples", "mean", "se", "ess", "acceptance", ...}
std::string samples_summary_json(std::span<const EnergySamples> chains);

}  // namespace mmes
