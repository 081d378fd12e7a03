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

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "mmes/partition.hpp"
#include "mmes/qstate.hpp"

namespace mmes {

// Purities of a state over the balanced bipartitions, in enumeration order.
struct PurityProfile {
  std::vector<std::uint64_t> masks;
  std::vector<double> purities;
  double mean = 0.0;
  double stddev = 0.0;  // population standard deviation
  double min = 0.0;
  double max = 0.0;

  double spread() const noexcept { return max - min; }
};

struct EvaluatorOptions {
  // Compensated accumulation of the Gram entries. Defaults on for n >= 14.
  int compensated_from_n = 14;
  // Workers for the per-bipartition loop in potential(); only used for
  // n >= parallel_from_n. Results are reduced in enumeration order.
  unsigned threads = 1;
  int parallel_from_n = 12;
  // Above this many bytes, index tables are rebuilt per evaluation instead of
  // being cached.
  std::size_t table_budget_bytes = std::size_t{64} << 20;
};

// Evaluates the entanglement potential H (mean purity over balanced
// bipartitions), its gradient, and purity profiles for states of a fixed
// qubit count. Holds scratch buffers, so one evaluator per thread; copies
// share the immutable index tables.
class PotentialEvaluator {
 public:
  explicit PotentialEvaluator(int n, EvaluatorOptions options = {});

  int qubits() const noexcept { return n_; }
  const std::vector<Bipartition>& bipartitions() const noexcept;

  double potential(std::span<const cplx> z);
  // Returns H and writes the gradient of H on the unit sphere (Euclidean
  // gradient w.r.t. real and imaginary parts, radial component removed):
  // grad[j] = dH/dRe(z_j) + i dH/dIm(z_j).
  double potential_and_gradient(std::span<const cplx> z, std::span<cplx> grad);
  PurityProfile profile(std::span<const cplx> z);
  double purity(std::span<const cplx> z, std::size_t bipartition_index);

 private:
  struct Shared;

  const IndexTables& tables_for(std::size_t index, IndexTables& scratch) const;
  double purity_with_scratch(std::span<const cplx> z, std::size_t index, std::vector<double>& re,
                             std::vector<double>& im, IndexTables& tables) const;

  int n_;
  EvaluatorOptions options_;
  bool compensated_;
  std::shared_ptr<const Shared> shared_;
  std::vector<double> re_, im_, gre_, gim_, wre_, wim_;
  IndexTables scratch_tables_;
};

// Tr(rho_A^2) for any (possibly unbalanced) bipartition, via the Gram matrix
// of the smaller side.
double purity(const PureState& state, const Bipartition& b);

// Mean purity over balanced bipartitions.
double potential(const PureState& state);

PurityProfile purity_profile(const PureState& state);

// Tangent gradient of potential() as 2^{n+1} reals, (d/dRe z_j, d/dIm z_j)
// interleaved.
std::vector<double> potential_gradient(const PureState& state);

double tangent_gradient_norm(const PureState& state);

}  // namespace mmes
