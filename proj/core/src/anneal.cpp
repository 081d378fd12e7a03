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

#include "mmes/anneal.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include <json.hpp>

#include "mmes/errors.hpp"
#include "mmes/parallel.hpp"

namespace mmes {
namespace {

double real_dot(std::span<const cplx> a, std::span<const cplx> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
  return s;
}

void normalize(std::span<cplx> z) {
  const double inv = 1.0 / std::sqrt(real_dot(z, z));
  for (auto& c : z) c *= inv;
}

struct RestartOutcome {
  std::optional<PureState> state;
  double energy = 0.0;  // in the minimized orientation (sign * H)
  std::size_t sweep = 0;
  bool polished = false;
};

RestartOutcome run_restart(int n, const AnnealSchedule& schedule, double sign, std::size_t restart) {
  PotentialEvaluator eval(n);
  Rng rng = make_stream(schedule.seed, restart);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const std::size_t dim = std::size_t{1} << n;
  std::vector<cplx> current(dim), proposal(dim), best(dim);
  haar_fill(current, rng);
  double energy = sign * eval.potential(current);
  double best_energy = energy;
  std::size_t best_sweep = 0;
  best = current;

  double log_step = std::log(schedule.initial_step);
  std::size_t sweep = 0;
  for (std::size_t level = 0; level < schedule.levels; ++level) {
    const double beta = schedule.beta_at(level);
    for (std::size_t s = 0; s < schedule.sweeps_per_level; ++s, ++sweep) {
      perturb_into(current, std::exp(log_step), rng, proposal);
      const double trial = sign * eval.potential(proposal);
      if (std::isnan(trial)) throw NumericalError("NaN energy during annealing");
      const double delta = beta * (trial - energy);
      const bool accept = delta <= 0.0 || uniform(rng) < std::exp(-delta);
      if (accept) {
        current.swap(proposal);
        energy = trial;
        if (energy < best_energy) {
          best_energy = energy;
          best = current;
          best_sweep = sweep + 1;
        }
      }
      const double gain = 0.5 / std::pow(1.0 + static_cast<double>(s), 0.6);
      log_step += gain * ((accept ? 1.0 : 0.0) - schedule.target_acceptance);
      log_step = std::clamp(log_step, std::log(1e-8), std::log(10.0));
    }
  }

  RestartOutcome out;
  out.state = PureState::normalized(n, best);
  out.energy = best_energy;
  out.sweep = best_sweep;
  if (schedule.polish) {
    const auto dir = sign > 0 ? Direction::Minimize : Direction::Maximize;
    auto p = polish(*out.state, dir);
    const double polished = sign * p.energy;
    if (polished < out.energy) {
      out.state = std::move(p.state);
      out.energy = polished;
      out.sweep = schedule.total_sweeps();
      out.polished = true;
    }
  }
  return out;
}

}  // namespace

void AnnealSchedule::validate() const {
  if (levels == 0 || sweeps_per_level == 0) throw DomainError("annealing schedule has zero sweeps");
  if (restarts < 1) throw ValidationError("restarts must be >= 1");
  if (!std::isfinite(beta_start) || !std::isfinite(beta_end)) throw ValidationError("beta bounds must be finite");
  if (!(beta_start >= 0.0)) throw ValidationError("beta_start must be >= 0");
  if (!(beta_end > beta_start)) throw ValidationError("beta_end must exceed beta_start");
  if (geometric && !(beta_start > 0.0)) throw ValidationError("geometric schedule needs beta_start > 0");
  if (!(initial_step > 0.0)) throw ValidationError("initial step must be positive");
  if (!(target_acceptance > 0.0 && target_acceptance < 1.0)) {
    throw ValidationError("target acceptance must lie in (0, 1)");
  }
}

double AnnealSchedule::beta_at(std::size_t level) const {
  if (levels <= 1) return beta_end;
  const double f = static_cast<double>(level) / static_cast<double>(levels - 1);
  if (geometric) return beta_start * std::pow(beta_end / beta_start, f);
  return beta_start + (beta_end - beta_start) * f;
}

PolishResult polish(const PureState& start, Direction direction, const PolishOptions& options) {
  const int n = start.qubits();
  const double sign = direction == Direction::Minimize ? 1.0 : -1.0;
  PotentialEvaluator eval(n);
  const std::size_t dim = start.dim();
  std::vector<cplx> z(start.amplitudes().begin(), start.amplitudes().end());
  std::vector<cplx> g(dim), trial(dim), trial_g(dim);

  double f = sign * eval.potential_and_gradient(z, g);
  for (auto& c : g) c *= sign;
  double gnorm2 = real_dot(g, g);
  double t = 1.0;
  std::size_t it = 0;
  for (; it < options.max_iterations && std::sqrt(gnorm2) >= options.gradient_tolerance; ++it) {
    double f_trial = 0.0;
    bool found = false;
    for (int backtrack = 0; backtrack < 60; ++backtrack) {
      for (std::size_t j = 0; j < dim; ++j) trial[j] = z[j] - t * g[j];
      normalize(trial);
      f_trial = sign * eval.potential(trial);
      if (f_trial <= f - options.armijo * t * gnorm2) {
        found = true;
        break;
      }
      t *= 0.5;
    }
    if (!found) break;
    const double f_new = sign * eval.potential_and_gradient(trial, trial_g);
    for (auto& c : trial_g) c *= sign;
    // Barzilai-Borwein trial step for the next iteration.
    double sx = 0.0, sy = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      const cplx dx = trial[j] - z[j];
      const cplx dg = trial_g[j] - g[j];
      sx += std::norm(dx);
      sy += dx.real() * dg.real() + dx.imag() * dg.imag();
    }
    t = sy > 0.0 ? std::clamp(sx / sy, 1e-6, 1e6) : std::min(2.0 * t, 1e6);
    z.swap(trial);
    g.swap(trial_g);
    f = f_new;
    gnorm2 = real_dot(g, g);
  }
  auto state = PureState::normalized(n, std::move(z));
  return {state, potential(state), std::sqrt(gnorm2), it};
}

double purity_floor(int n) {
  check_qubit_count(n);
  return std::ldexp(1.0, -(n / 2));
}

MmesResult anneal(int n, const AnnealSchedule& schedule, Direction direction) {
  schedule.validate();
  check_qubit_count(n);
  const double sign = direction == Direction::Minimize ? 1.0 : -1.0;
  std::vector<RestartOutcome> outcomes(schedule.restarts);
  parallel_for(schedule.restarts, schedule.threads,
               [&](std::size_t r) { outcomes[r] = run_restart(n, schedule, sign, r); });

  std::size_t winner = 0;
  for (std::size_t r = 1; r < outcomes.size(); ++r) {
    if (outcomes[r].energy < outcomes[winner].energy) winner = r;
  }
  const auto& w = outcomes[winner];
  MmesResult result{*w.state, potential(*w.state), purity_profile(*w.state), 0.0,
                    winner,   w.sweep,             w.polished,              {}};
  result.gap = result.energy - purity_floor(n);
  for (const auto& o : outcomes) result.restart_energies.push_back(sign * o.energy);
  return result;
}

Certificate certify(const PureState& state) {
  Certificate c;
  c.profile = purity_profile(state);
  c.energy = potential(state);
  c.gap = c.energy - purity_floor(state.qubits());
  c.spread = c.profile.spread();
  c.gradient_norm = tangent_gradient_norm(state);
  c.perfect = c.gap < kPerfectGap;
  return c;
}

Certificate certify(const MmesResult& result) { return certify(result.state); }

namespace {

nlohmann::json certificate_json(const Certificate& c, int n) {
  nlohmann::json doc;
  doc["n"] = n;
  doc["energy"] = c.energy;
  doc["gap"] = c.gap;
  doc["floor"] = purity_floor(n);
  doc["spread"] = c.spread;
  doc["gradient_norm"] = c.gradient_norm;
  doc["perfect"] = c.perfect;
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < c.profile.masks.size(); ++i) {
    const auto b = Bipartition::from_mask(n, c.profile.masks[i]);
    rows.push_back({{"mask", b.mask()}, {"qubits", b.members()}, {"purity", c.profile.purities[i]}});
  }
  doc["purities"] = std::move(rows);
  doc["purity_mean"] = c.profile.mean;
  doc["purity_std"] = c.profile.stddev;
  return doc;
}

}  // namespace

std::string report_json(const Certificate& certificate, int n) {
  return certificate_json(certificate, n).dump(2);
}

std::string report_json(const MmesResult& result, const Certificate& certificate) {
  auto doc = certificate_json(certificate, result.state.qubits());
  doc["restart"] = result.restart;
  doc["sweep"] = result.sweep;
  doc["polished"] = result.polished;
  doc["restart_energies"] = result.restart_energies;
  return doc.dump(2);
}

}  // namespace mmes
