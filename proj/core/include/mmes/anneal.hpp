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
#include <string>
#include <vector>

#include "mmes/entanglement.hpp"
#include "mmes/qstate.hpp"

namespace mmes {

// Minimize searches for maximally multipartite entangled states (low H);
// Maximize drives toward separable states (H = 1).
enum class Direction { Minimize, Maximize };

struct AnnealSchedule {
  double beta_start = 1.0;
  double beta_end = 1e5;
  std::size_t levels = 60;
  // Metropolis proposals per level. Each proposal moves every amplitude.
  std::size_t sweeps_per_level = 2000;
  bool geometric = true;
  std::size_t restarts = 8;
  bool polish = true;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0 = default_threads()
  double initial_step = 0.3;
  double target_acceptance = 0.35;

  void validate() const;
  double beta_at(std::size_t level) const;
  std::size_t total_sweeps() const noexcept { return levels * sweeps_per_level; }
};

struct PolishOptions {
  double gradient_tolerance = 1e-9;
  std::size_t max_iterations = 10'000;
  double armijo = 1e-4;
};

struct PolishResult {
  PureState state;
  double energy;
  double gradient_norm;
  std::size_t iterations;
};

// Projected gradient descent on the sphere (ascent for Maximize) with
// Barzilai-Borwein trial steps and Armijo backtracking; the retraction is
// renormalization.
PolishResult polish(const PureState& start, Direction direction = Direction::Minimize,
                    const PolishOptions& options = {});

struct MmesResult {
  PureState state;
  double energy;
  PurityProfile profile;
  double gap;  // energy - 1/N_A
  std::size_t restart;
  // Proposal count within the restart at which the best state was seen;
  // equals the schedule's total when the polish produced it.
  std::size_t sweep;
  bool polished;
  std::vector<double> restart_energies;
};

// Best-over-restarts simulated annealing of H with an optional gradient
// polish of each restart's best state. Ties go to the lowest restart index.
MmesResult anneal(int n, const AnnealSchedule& schedule, Direction direction = Direction::Minimize);

struct Certificate {
  double energy;
  double gap;
  double spread;  // max - min purity over balanced bipartitions
  double gradient_norm;
  bool perfect;   // gap < kPerfectGap
  PurityProfile profile;
};

inline constexpr double kPerfectGap = 1e-6;

// Recomputes everything from the state alone.
Certificate certify(const PureState& state);
Certificate certify(const MmesResult& result);

// 1/N_A for balanced bipartitions of n qubits.
double purity_floor(int n);

// {"n", "energy", "gap", "spread", "gradient_norm", "perfect", "restart",
//  "sweep", "polished", "restart_energies", "purities": [{"mask", "qubits",
//  "purity"}...]}
std::string report_json(const MmesResult& result, const Certificate& certificate);
std::string report_json(const Certificate& certificate, int n);

}  // namespace mmes
