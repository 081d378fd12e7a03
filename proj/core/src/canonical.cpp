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

#include "mmes/canonical.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "mmes/entanglement.hpp"
#include "mmes/errors.hpp"
#include "mmes/parallel.hpp"
#include "mmes/qstate.hpp"

namespace mmes {
namespace {

constexpr double kMinStep = 1e-7;
constexpr double kMaxStep = 10.0;

struct Batches {
  std::size_t count = 0;
  std::size_t size = 0;
  std::size_t offset = 0;  // leading samples dropped so batches tile the tail
};

// floor(sqrt(n)) batches of equal size over the most recent samples.
Batches make_batches(std::size_t n) {
  Batches b;
  b.count = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  if (b.count < 2) return {};
  b.size = n / b.count;
  b.offset = n - b.count * b.size;
  return b;
}

struct PowerSums {
  double count = 0.0;
  double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;

  void add(double x) {
    const double x2 = x * x;
    count += 1.0;
    s1 += x;
    s2 += x2;
    s3 += x2 * x;
    s4 += x2 * x2;
  }
  PowerSums operator-(const PowerSums& o) const {
    return {count - o.count, s1 - o.s1, s2 - o.s2, s3 - o.s3, s4 - o.s4};
  }
  PowerSums& operator+=(const PowerSums& o) {
    count += o.count;
    s1 += o.s1;
    s2 += o.s2;
    s3 += o.s3;
    s4 += o.s4;
    return *this;
  }
};

// k-statistics from power sums of x - shift.
std::array<double, 4> k_statistics(const PowerSums& p, double shift) {
  const double n = p.count;
  const double d = p.s1 / n;
  const double a2 = p.s2 / n, a3 = p.s3 / n, a4 = p.s4 / n;
  const double m2 = std::max(a2 - d * d, 0.0);
  const double m3 = a3 - 3.0 * d * a2 + 2.0 * d * d * d;
  const double m4 = a4 - 4.0 * d * a3 + 6.0 * d * d * a2 - 3.0 * d * d * d * d;
  std::array<double, 4> k{};
  k[0] = shift + d;
  k[1] = n > 1 ? n / (n - 1.0) * m2 : 0.0;
  k[2] = n > 2 ? n * n / ((n - 1.0) * (n - 2.0)) * m3 : 0.0;
  k[3] = n > 3 ? n * n * ((n + 1.0) * m4 - 3.0 * (n - 1.0) * m2 * m2) /
                     ((n - 1.0) * (n - 2.0) * (n - 3.0))
               : 0.0;
  return k;
}

double variance(std::span<const double> x, double mean) {
  double s = 0.0;
  for (double v : x) s += (v - mean) * (v - mean);
  return x.size() > 1 ? s / static_cast<double>(x.size() - 1) : 0.0;
}

// log-sum-exp normalized weights.
std::vector<double> normalized_weights(const std::vector<double>& log_w) {
  const double top = *std::max_element(log_w.begin(), log_w.end());
  std::vector<double> w(log_w.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::exp(log_w[i] - top);
  return w;
}

Reweighted finish_reweight(double beta, std::vector<double> log_w, const EnergySamples& samples,
                           const ReweightOptions& options) {
  const auto& e = samples.energies;
  const auto w = normalized_weights(log_w);
  double sw = 0.0, sw2 = 0.0, swe = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    sw += w[i];
    sw2 += w[i] * w[i];
    swe += w[i] * e[i];
  }
  Reweighted r;
  r.beta = beta;
  r.ess = sw * sw / sw2;
  if (r.ess < options.min_ess) {
    std::ostringstream msg;
    msg << "reweighting to beta = " << beta << " leaves an effective sample size of " << r.ess
        << " (< " << options.min_ess << ")";
    throw DegenerateWeightsError(msg.str(), r.ess);
  }
  r.mean = swe / sw;

  // Delete-one-batch jackknife of the ratio estimator.
  const Batches b = make_batches(e.size());
  if (b.count >= 2) {
    std::vector<double> bw(b.count, 0.0), bwe(b.count, 0.0);
    for (std::size_t k = 0; k < b.count; ++k) {
      for (std::size_t i = b.offset + k * b.size; i < b.offset + (k + 1) * b.size; ++i) {
        bw[k] += w[i];
        bwe[k] += w[i] * e[i];
      }
    }
    const double tw = std::accumulate(bw.begin(), bw.end(), 0.0);
    const double twe = std::accumulate(bwe.begin(), bwe.end(), 0.0);
    std::vector<double> loo(b.count);
    double avg = 0.0;
    std::size_t used = 0;
    for (std::size_t k = 0; k < b.count; ++k) {
      const double rest = tw - bw[k];
      loo[k] = rest > 0.0 ? (twe - bwe[k]) / rest : r.mean;
      avg += loo[k];
      ++used;
    }
    avg /= static_cast<double>(used);
    double s = 0.0;
    for (double v : loo) s += (v - avg) * (v - avg);
    r.se = std::sqrt(s * static_cast<double>(b.count - 1) / static_cast<double>(b.count));
  } else {
    double var = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) var += w[i] * (e[i] - r.mean) * (e[i] - r.mean);
    r.se = std::sqrt(var / sw / r.ess);
  }
  r.histogram = make_histogram(e, w, options.histogram);
  r.log_weights = std::move(log_w);
  return r;
}

}  // namespace

void CanonicalConfig::validate() const {
  if (!std::isfinite(beta)) throw ValidationError("beta must be finite");
  if (!(steps > burn_in)) throw ValidationError("steps must exceed burn_in");
  if (thin < 1) throw ValidationError("thin must be >= 1");
  if (!(step_size > 0.0)) throw ValidationError("step_size must be positive");
  if (chains < 1) throw ValidationError("chains must be >= 1");
  if (adapt && !(target_acceptance > 0.0 && target_acceptance < 1.0)) {
    throw ValidationError("target acceptance must lie in (0, 1)");
  }
}

EnergySamples metropolis_chain(int n, const CanonicalConfig& config, std::size_t chain_index) {
  config.validate();
  check_qubit_count(n);
  PotentialEvaluator eval(n);
  Rng rng = make_stream(config.seed, chain_index);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  const std::size_t dim = std::size_t{1} << n;
  std::vector<cplx> current(dim), proposal(dim);
  haar_fill(current, rng);
  double energy = eval.potential(current);
  double log_step = std::log(config.step_size);
  const double beta = config.beta;

  EnergySamples out;
  out.beta = beta;
  out.n = n;
  out.seed = config.seed;
  out.chain = chain_index;
  const std::size_t recorded = (config.steps - config.burn_in + config.thin - 1) / config.thin;
  out.energies.reserve(recorded);
  out.steps.reserve(recorded);

  std::size_t accepted = 0;
  for (std::size_t t = 0; t < config.steps; ++t) {
    perturb_into(current, std::exp(log_step), rng, proposal);
    const double trial = eval.potential(proposal);
    if (std::isnan(trial)) throw NumericalError("NaN energy in Metropolis chain");
    const double delta = beta * (trial - energy);
    const bool accept = delta <= 0.0 || uniform(rng) < std::exp(-delta);
    if (accept) {
      current.swap(proposal);
      energy = trial;
    }
    if (t < config.burn_in) {
      if (config.adapt) {
        const double gain = 1.0 / std::pow(1.0 + static_cast<double>(t), 0.6);
        log_step += gain * ((accept ? 1.0 : 0.0) - config.target_acceptance);
        log_step = std::clamp(log_step, std::log(kMinStep), std::log(kMaxStep));
      }
      continue;
    }
    accepted += accept ? 1 : 0;
    if ((t - config.burn_in) % config.thin == 0) {
      out.energies.push_back(energy);
      out.steps.push_back(t);
    }
  }
  const std::size_t phase = config.steps - config.burn_in;
  out.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(phase);
  out.step_size = std::exp(log_step);
  if (out.acceptance_rate < kLowAcceptance) {
    out.warning = "acceptance rate below 0.01 after adaptation";
  }
  return out;
}

std::vector<EnergySamples> metropolis_chains(int n, const CanonicalConfig& config) {
  config.validate();
  std::vector<EnergySamples> out(config.chains);
  parallel_for(config.chains, config.threads,
               [&](std::size_t c) { out[c] = metropolis_chain(n, config, c); });
  return out;
}

namespace {

template <typename Measure>
EnergySamples independent_samples(int n, std::size_t count, std::uint64_t seed, unsigned threads,
                                  Measure measure) {
  check_qubit_count(n);
  if (count == 0) throw DomainError("sample count must be positive");
  EnergySamples out;
  out.n = n;
  out.seed = seed;
  out.energies.resize(count);
  out.steps.resize(count);
  std::iota(out.steps.begin(), out.steps.end(), std::size_t{0});
  // Fixed-size blocks keep per-thread scratch reuse independent of scheduling.
  constexpr std::size_t kBlock = 64;
  const std::size_t blocks = (count + kBlock - 1) / kBlock;
  parallel_for(blocks, threads, [&](std::size_t blk) {
    PotentialEvaluator eval(n);
    std::vector<cplx> z(std::size_t{1} << n);
    for (std::size_t i = blk * kBlock; i < std::min(count, (blk + 1) * kBlock); ++i) {
      Rng rng = make_stream(seed, i);
      haar_fill(z, rng);
      out.energies[i] = measure(eval, z);
    }
  });
  return out;
}

}  // namespace

EnergySamples typical_samples(int n, std::size_t count, std::uint64_t seed, unsigned threads) {
  return independent_samples(n, count, seed, threads, [](PotentialEvaluator& eval, std::span<const cplx> z) {
    return eval.potential(z);
  });
}

EnergySamples typical_purities(int n, std::uint64_t mask, std::size_t count, std::uint64_t seed,
                               unsigned threads) {
  const Bipartition b = Bipartition::from_mask(n, mask);
  return independent_samples(n, count, seed, threads, [&b](PotentialEvaluator&, std::span<const cplx> z) {
    std::vector<cplx> copy(z.begin(), z.end());
    return purity(PureState::from_amplitudes(b.qubits(), std::move(copy)), b);
  });
}

EnergySamples pool(std::span<const EnergySamples> chains) {
  if (chains.empty()) throw DomainError("nothing to pool");
  EnergySamples out;
  out.beta = chains.front().beta;
  out.n = chains.front().n;
  out.seed = chains.front().seed;
  double acc = 0.0;
  double step = 0.0;
  for (const auto& c : chains) {
    if (c.beta != out.beta || c.n != out.n) throw DomainError("pooled chains disagree on beta or n");
    out.energies.insert(out.energies.end(), c.energies.begin(), c.energies.end());
    out.steps.insert(out.steps.end(), c.steps.begin(), c.steps.end());
    acc += c.acceptance_rate;
    step += c.step_size;
    if (out.warning.empty()) out.warning = c.warning;
  }
  out.acceptance_rate = acc / static_cast<double>(chains.size());
  out.step_size = step / static_cast<double>(chains.size());
  return out;
}

MeanEstimate mean_estimate(std::span<const double> series) {
  if (series.empty()) throw DomainError("empty series");
  MeanEstimate m;
  const double count = static_cast<double>(series.size());
  m.mean = std::accumulate(series.begin(), series.end(), 0.0) / count;
  const double var = variance(series, m.mean);
  if (var == 0.0) {
    m.se = 0.0;
    m.ess = count;
    return m;
  }
  const Batches b = make_batches(series.size());
  if (b.count < 2) {
    m.se = std::sqrt(var / count);
    m.ess = count;
    return m;
  }
  std::vector<double> means(b.count);
  for (std::size_t k = 0; k < b.count; ++k) {
    const auto first = series.begin() + static_cast<std::ptrdiff_t>(b.offset + k * b.size);
    means[k] = std::accumulate(first, first + static_cast<std::ptrdiff_t>(b.size), 0.0) /
               static_cast<double>(b.size);
  }
  const double bm = std::accumulate(means.begin(), means.end(), 0.0) / static_cast<double>(b.count);
  const double bvar = variance(means, bm);
  m.se = std::sqrt(bvar / static_cast<double>(b.count));
  // An anticorrelated chain can make the batch-means error smaller than the
  // i.i.d. one; the ESS is capped at the sample count either way.
  m.ess = m.se > 0.0 ? std::min(count, var / (m.se * m.se)) : count;
  m.se = std::max(m.se, std::sqrt(var / count));
  return m;
}

Reweighted reweight(const EnergySamples& samples, double beta, const ReweightOptions& options) {
  if (samples.energies.empty()) throw DomainError("cannot reweight an empty sample");
  if (!std::isfinite(beta)) throw DomainError("target beta must be finite");
  std::vector<double> log_w(samples.size());
  const double d = beta - samples.beta;
  for (std::size_t i = 0; i < log_w.size(); ++i) log_w[i] = -d * samples.energies[i];
  return finish_reweight(beta, std::move(log_w), samples, options);
}

Reweighted reweight(const Reweighted& prior, const EnergySamples& samples, double beta,
                    const ReweightOptions& options) {
  if (samples.energies.empty()) throw DomainError("cannot reweight an empty sample");
  if (prior.log_weights.size() != samples.size()) throw DomainError("prior weights do not match samples");
  std::vector<double> log_w(samples.size());
  const double d = beta - prior.beta;
  for (std::size_t i = 0; i < log_w.size(); ++i) {
    log_w[i] = prior.log_weights[i] - d * samples.energies[i];
  }
  return finish_reweight(beta, std::move(log_w), samples, options);
}

std::vector<ScanRow> mean_energy_scan(int n, std::span<const double> betas,
                                      const CanonicalConfig& config) {
  config.validate();
  std::vector<double> sorted(betas.begin(), betas.end());
  for (double b : sorted) {
    if (!std::isfinite(b)) throw DomainError("beta list must be finite");
  }
  std::sort(sorted.begin(), sorted.end());
  const std::size_t jobs = sorted.size() * config.chains;
  std::vector<EnergySamples> results(jobs);
  parallel_for(jobs, config.threads, [&](std::size_t job) {
    CanonicalConfig c = config;
    c.beta = sorted[job / config.chains];
    results[job] = metropolis_chain(n, c, job);
  });

  std::vector<ScanRow> rows;
  rows.reserve(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    ScanRow row;
    row.beta = sorted[i];
    double se2 = 0.0;
    for (std::size_t c = 0; c < config.chains; ++c) {
      const auto& s = results[i * config.chains + c];
      const auto m = mean_estimate(s.energies);
      row.mean += m.mean;
      se2 += m.se * m.se;
      row.acceptance += s.acceptance_rate;
    }
    const double k = static_cast<double>(config.chains);
    row.mean /= k;
    row.se = std::sqrt(se2) / k;
    row.acceptance /= k;
    rows.push_back(row);
  }
  return rows;
}

std::vector<CumulantEstimate> cumulants(std::span<const double> series, int max_order) {
  if (max_order < 1 || max_order > 4) throw DomainError("cumulant order must be 1..4");
  if (series.empty()) throw DomainError("empty series");
  const auto m = mean_estimate(series);
  const double needed = max_order <= 2 ? 100.0 : 1e4;
  if (m.ess < needed) {
    std::ostringstream msg;
    msg << "cumulants up to order " << max_order << " need an effective sample size of "
        << needed << ", have " << m.ess;
    throw DomainError(msg.str());
  }

  const double shift = m.mean;
  PowerSums total;
  for (double x : series) total.add(x - shift);
  const auto k = k_statistics(total, shift);

  std::array<double, 4> se{};
  const Batches b = make_batches(series.size());
  if (b.count >= 2) {
    std::vector<PowerSums> batch(b.count);
    PowerSums used;
    for (std::size_t j = 0; j < b.count; ++j) {
      for (std::size_t i = b.offset + j * b.size; i < b.offset + (j + 1) * b.size; ++i) {
        batch[j].add(series[i] - shift);
      }
      used += batch[j];
    }
    std::vector<std::array<double, 4>> loo(b.count);
    std::array<double, 4> avg{};
    for (std::size_t j = 0; j < b.count; ++j) {
      loo[j] = k_statistics(used - batch[j], shift);
      for (int r = 0; r < 4; ++r) avg[r] += loo[j][r] / static_cast<double>(b.count);
    }
    const double factor = static_cast<double>(b.count - 1) / static_cast<double>(b.count);
    for (int r = 0; r < 4; ++r) {
      double s = 0.0;
      for (const auto& v : loo) s += (v[r] - avg[r]) * (v[r] - avg[r]);
      se[r] = std::sqrt(factor * s);
    }
  }

  std::vector<CumulantEstimate> out;
  for (int r = 1; r <= max_order; ++r) out.push_back({r, k[r - 1], se[r - 1]});
  return out;
}

std::vector<CumulantEstimate> cumulants(const EnergySamples& samples, int max_order) {
  return cumulants(std::span<const double>(samples.energies), max_order);
}

void write_samples_csv(const EnergySamples& samples, std::ostream& out) {
  const auto old = out.precision(17);
  out << "step,E\n";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out << (i < samples.steps.size() ? samples.steps[i] : i) << ',' << samples.energies[i] << '\n';
  }
  out.precision(old);
}

EnergySamples read_samples_csv(std::istream& in) {
  EnergySamples s;
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty samples file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "step,E") throw FormatError("samples CSV must start with the header 'step,E'");
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw FormatError("samples CSV line " + std::to_string(lineno) + " needs two columns");
    }
    try {
      std::size_t used = 0;
      const auto step = std::stoull(line.substr(0, comma), &used);
      if (used != comma) throw std::invalid_argument("step");
      const std::string etext = line.substr(comma + 1);
      const double e = std::stod(etext, &used);
      if (used != etext.size()) throw std::invalid_argument("E");
      s.steps.push_back(step);
      s.energies.push_back(e);
    } catch (const std::exception&) {
      throw FormatError("cannot parse samples CSV line " + std::to_string(lineno));
    }
  }
  if (s.energies.empty()) throw FormatError("samples CSV has no rows");
  return s;
}

std::string samples_summary_json(std::span<const EnergySamples> chains) {
  const EnergySamples all = pool(chains);
  nlohmann::json doc;
  doc["beta"] = all.beta;
  doc["n"] = all.n;
  doc["seed"] = all.seed;
  doc["chains"] = chains.size();
  doc["samples"] = all.size();
  // Chains are independent: combine per-chain batch-means errors.
  double mean = 0.0, se2 = 0.0, ess = 0.0;
  for (const auto& c : chains) {
    const auto m = mean_estimate(c.energies);
    mean += m.mean * static_cast<double>(c.size());
    se2 += m.se * m.se * static_cast<double>(c.size()) * static_cast<double>(c.size());
    ess += m.ess;
  }
  const double total = static_cast<double>(all.size());
  doc["mean"] = mean / total;
  doc["se"] = std::sqrt(se2) / total;
  doc["ess"] = ess;
  doc["acceptance"] = all.acceptance_rate;
  doc["step_size"] = all.step_size;
  if (!all.warning.empty()) doc["warning"] = all.warning;
  return doc.dump(2);
}

}  // namespace mmes
