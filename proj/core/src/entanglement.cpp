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

#include "mmes/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "mmes/errors.hpp"
#include "mmes/parallel.hpp"

namespace mmes {
namespace {

// Neumaier accumulator.
struct Compensated {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      carry += (sum - t) + x;
    } else {
      carry += (x - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + carry; }
};

// Scatters z into the rows x cols matrix M[row[j]][col[j]] = z_j, split into
// real and imaginary planes.
void gather(std::span<const cplx> z, const std::uint32_t* row, const std::uint32_t* col,
            std::size_t cols, double* re, double* im) {
  for (std::size_t j = 0; j < z.size(); ++j) {
    const std::size_t k = row[j] * cols + col[j];
    re[k] = z[j].real();
    im[k] = z[j].imag();
  }
}

// <a|b> style row product sum_k a_k conj(b_k), split into planes.
inline void row_product(const double* ar, const double* ai, const double* br, const double* bi,
                        std::size_t len, double& out_re, double& out_im) {
  double sr = 0.0;
  double si = 0.0;
#pragma omp simd reduction(+ : sr, si)
  for (std::size_t k = 0; k < len; ++k) {
    sr += ar[k] * br[k] + ai[k] * bi[k];
    si += ai[k] * br[k] - ar[k] * bi[k];
  }
  out_re = sr;
  out_im = si;
}

inline void row_product_compensated(const double* ar, const double* ai, const double* br,
                                    const double* bi, std::size_t len, double& out_re,
                                    double& out_im) {
  constexpr std::size_t kBlock = 32;
  Compensated cr;
  Compensated ci;
  for (std::size_t k0 = 0; k0 < len; k0 += kBlock) {
    const std::size_t m = std::min(kBlock, len - k0);
    double br_, bi_;
    row_product(ar + k0, ai + k0, br + k0, bi + k0, m, br_, bi_);
    cr.add(br_);
    ci.add(bi_);
  }
  out_re = cr.value();
  out_im = ci.value();
}

// sum_{a,b} |G_ab|^2 with G = M M^dagger. When g_re/g_im are non-null the
// full Hermitian G is written out (rows x rows).
double gram_purity(const double* re, const double* im, std::size_t rows, std::size_t cols,
                   bool compensated, double* g_re, double* g_im) {
  Compensated diag;
  Compensated off;
  for (std::size_t a = 0; a < rows; ++a) {
    const double* ar = re + a * cols;
    const double* ai = im + a * cols;
    for (std::size_t b = a; b < rows; ++b) {
      const double* br = re + b * cols;
      const double* bi = im + b * cols;
      double gr, gi;
      if (compensated) {
        row_product_compensated(ar, ai, br, bi, cols, gr, gi);
      } else {
        row_product(ar, ai, br, bi, cols, gr, gi);
      }
      if (a == b) {
        gi = 0.0;
        diag.add(gr * gr);
      } else {
        off.add(gr * gr + gi * gi);
      }
      if (g_re) {
        g_re[a * rows + b] = gr;
        g_im[a * rows + b] = gi;
        g_re[b * rows + a] = gr;
        g_im[b * rows + a] = -gi;
      }
    }
  }
  return diag.value() + 2.0 * off.value();
}

// W = G M for Hermitian G (rows x rows) and M (rows x cols).
void gram_times_matrix(const double* g_re, const double* g_im, const double* re,
                       const double* im, std::size_t rows, std::size_t cols, double* w_re,
                       double* w_im) {
  std::fill(w_re, w_re + rows * cols, 0.0);
  std::fill(w_im, w_im + rows * cols, 0.0);
  for (std::size_t a = 0; a < rows; ++a) {
    double* wr = w_re + a * cols;
    double* wi = w_im + a * cols;
    for (std::size_t b = 0; b < rows; ++b) {
      const double gr = g_re[a * rows + b];
      const double gi = g_im[a * rows + b];
      const double* br = re + b * cols;
      const double* bi = im + b * cols;
#pragma omp simd
      for (std::size_t k = 0; k < cols; ++k) {
        wr[k] += gr * br[k] - gi * bi[k];
        wi[k] += gr * bi[k] + gi * br[k];
      }
    }
  }
}

void check_state_size(int n, std::span<const cplx> z) {
  if (z.size() != (std::size_t{1} << n)) throw DomainError("state dimension does not match evaluator");
}

PurityProfile summarize(std::vector<std::uint64_t> masks, std::vector<double> purities) {
  PurityProfile p;
  p.masks = std::move(masks);
  p.purities = std::move(purities);
  if (p.purities.empty()) return p;
  double sum = 0.0;
  double sum_sq = 0.0;
  p.min = std::numeric_limits<double>::infinity();
  p.max = -std::numeric_limits<double>::infinity();
  for (double x : p.purities) {
    sum += x;
    p.min = std::min(p.min, x);
    p.max = std::max(p.max, x);
  }
  const double count = static_cast<double>(p.purities.size());
  p.mean = sum / count;
  for (double x : p.purities) sum_sq += (x - p.mean) * (x - p.mean);
  p.stddev = std::sqrt(sum_sq / count);
  return p;
}

}  // namespace

struct PotentialEvaluator::Shared {
  std::vector<Bipartition> all;
  // Indices into `all` that enter H. For even n only the subsets containing
  // qubit 0 are kept: each complementary pair has equal purity.
  std::vector<std::size_t> terms;
  // Empty when the budget does not allow caching.
  std::vector<IndexTables> tables;
};

PotentialEvaluator::PotentialEvaluator(int n, EvaluatorOptions options)
    : n_(n), options_(options), compensated_(n >= options.compensated_from_n) {
  check_qubit_count(n);
  auto shared = std::make_shared<Shared>();
  shared->all = balanced_bipartitions(n);
  for (std::size_t i = 0; i < shared->all.size(); ++i) {
    if (n % 2 == 1 || shared->all[i].contains(0)) shared->terms.push_back(i);
  }
  const std::size_t dim = std::size_t{1} << n;
  const std::size_t bytes = shared->all.size() * dim * 2 * sizeof(std::uint32_t);
  if (bytes <= options.table_budget_bytes) {
    shared->tables.reserve(shared->all.size());
    for (const auto& b : shared->all) shared->tables.push_back(make_index_tables(b));
  }
  shared_ = std::move(shared);
  re_.resize(dim);
  im_.resize(dim);
}

const std::vector<Bipartition>& PotentialEvaluator::bipartitions() const noexcept {
  return shared_->all;
}

const IndexTables& PotentialEvaluator::tables_for(std::size_t index, IndexTables& scratch) const {
  if (!shared_->tables.empty()) return shared_->tables[index];
  scratch = make_index_tables(shared_->all[index]);
  return scratch;
}

double PotentialEvaluator::purity_with_scratch(std::span<const cplx> z, std::size_t index,
                                               std::vector<double>& re, std::vector<double>& im,
                                               IndexTables& scratch) const {
  const auto& b = shared_->all[index];
  const auto& t = tables_for(index, scratch);
  const std::size_t rows = b.dim_a();
  const std::size_t cols = b.dim_complement();
  gather(z, t.row.data(), t.col.data(), cols, re.data(), im.data());
  return gram_purity(re.data(), im.data(), rows, cols, compensated_, nullptr, nullptr);
}

double PotentialEvaluator::purity(std::span<const cplx> z, std::size_t bipartition_index) {
  check_state_size(n_, z);
  if (bipartition_index >= shared_->all.size()) throw DomainError("bipartition index out of range");
  return purity_with_scratch(z, bipartition_index, re_, im_, scratch_tables_);
}

double PotentialEvaluator::potential(std::span<const cplx> z) {
  check_state_size(n_, z);
  const auto& terms = shared_->terms;
  const unsigned threads = options_.threads == 0 ? default_threads() : options_.threads;
  if (threads > 1 && n_ >= options_.parallel_from_n) {
    std::vector<double> values(terms.size());
    parallel_for(terms.size(), threads, [&](std::size_t i) {
      thread_local std::vector<double> re, im;
      thread_local IndexTables scratch;
      re.resize(z.size());
      im.resize(z.size());
      values[i] = purity_with_scratch(z, terms[i], re, im, scratch);
    });
    Compensated sum;
    for (double v : values) sum.add(v);
    return sum.value() / static_cast<double>(terms.size());
  }
  Compensated sum;
  for (std::size_t i : terms) sum.add(purity_with_scratch(z, i, re_, im_, scratch_tables_));
  return sum.value() / static_cast<double>(terms.size());
}

double PotentialEvaluator::potential_and_gradient(std::span<const cplx> z, std::span<cplx> grad) {
  check_state_size(n_, z);
  if (grad.size() != z.size()) throw DomainError("gradient buffer size mismatch");
  std::fill(grad.begin(), grad.end(), cplx{});
  const auto& terms = shared_->terms;
  const double scale = 4.0 / static_cast<double>(terms.size());
  Compensated sum;
  for (std::size_t i : terms) {
    const auto& b = shared_->all[i];
    const auto& t = tables_for(i, scratch_tables_);
    const std::size_t rows = b.dim_a();
    const std::size_t cols = b.dim_complement();
    gre_.resize(rows * rows);
    gim_.resize(rows * rows);
    wre_.resize(rows * cols);
    wim_.resize(rows * cols);
    gather(z, t.row.data(), t.col.data(), cols, re_.data(), im_.data());
    sum.add(gram_purity(re_.data(), im_.data(), rows, cols, compensated_, gre_.data(), gim_.data()));
    // d pi / d(Re M, Im M) = 4 G M
    gram_times_matrix(gre_.data(), gim_.data(), re_.data(), im_.data(), rows, cols, wre_.data(),
                      wim_.data());
    for (std::size_t j = 0; j < z.size(); ++j) {
      const std::size_t k = t.row[j] * cols + t.col[j];
      grad[j] += scale * cplx(wre_[k], wim_[k]);
    }
  }
  double radial = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j) {
    radial += z[j].real() * grad[j].real() + z[j].imag() * grad[j].imag();
  }
  for (std::size_t j = 0; j < z.size(); ++j) grad[j] -= radial * z[j];
  const double h = sum.value() / static_cast<double>(terms.size());
  if (std::isnan(h)) throw NumericalError("potential evaluated to NaN");
  return h;
}

PurityProfile PotentialEvaluator::profile(std::span<const cplx> z) {
  check_state_size(n_, z);
  std::vector<std::uint64_t> masks;
  std::vector<double> values;
  masks.reserve(shared_->all.size());
  values.reserve(shared_->all.size());
  for (std::size_t i = 0; i < shared_->all.size(); ++i) {
    masks.push_back(shared_->all[i].mask());
    values.push_back(purity_with_scratch(z, i, re_, im_, scratch_tables_));
  }
  return summarize(std::move(masks), std::move(values));
}

namespace {

PotentialEvaluator& cached_evaluator(int n) {
  thread_local std::map<int, PotentialEvaluator> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, PotentialEvaluator(n)).first;
  return it->second;
}

}  // namespace

double purity(const PureState& state, const Bipartition& b) {
  if (state.qubits() != b.qubits()) throw DomainError("state and bipartition disagree on n");
  // The Gram matrix is formed on the smaller factor; pi_A = pi_Abar.
  const Bipartition small = b.size_a() <= b.size_complement() ? b : b.complement();
  const auto t = make_index_tables(small);
  const std::size_t rows = small.dim_a();
  const std::size_t cols = small.dim_complement();
  std::vector<double> re(state.dim()), im(state.dim());
  gather(state.amplitudes(), t.row.data(), t.col.data(), cols, re.data(), im.data());
  return gram_purity(re.data(), im.data(), rows, cols, state.qubits() >= 14, nullptr, nullptr);
}

double potential(const PureState& state) {
  return cached_evaluator(state.qubits()).potential(state.amplitudes());
}

PurityProfile purity_profile(const PureState& state) {
  return cached_evaluator(state.qubits()).profile(state.amplitudes());
}

std::vector<double> potential_gradient(const PureState& state) {
  std::vector<cplx> grad(state.dim());
  cached_evaluator(state.qubits()).potential_and_gradient(state.amplitudes(), grad);
  std::vector<double> out;
  out.reserve(2 * grad.size());
  for (const auto& g : grad) {
    out.push_back(g.real());
    out.push_back(g.imag());
  }
  return out;
}

double tangent_gradient_norm(const PureState& state) {
  const auto g = potential_gradient(state);
  double s = 0.0;
  for (double x : g) s += x * x;
  return std::sqrt(s);
}

}  // namespace mmes
