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

// Test-only reference computations. Everything here goes through explicit
// density matrices or the literal quartic sum, never through the library's
// reshape/Gram kernel.

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "mmes/partition.hpp"
#include "mmes/qstate.hpp"

namespace mmes::oracle {

inline std::uint64_t bit_of_qubit(std::uint64_t j, int n, int q) { return (j >> (n - 1 - q)) & 1U; }

// Sub-bit-string of j on the qubits where `want` is true, first qubit most
// significant.
inline std::uint64_t substring(std::uint64_t j, int n, const std::vector<bool>& want) {
  std::uint64_t v = 0;
  for (int q = 0; q < n; ++q) {
    if (want[q]) v = 2 * v + bit_of_qubit(j, n, q);
  }
  return v;
}

inline std::vector<bool> membership(const Bipartition& b, bool in_a) {
  std::vector<bool> m(b.qubits());
  for (int q = 0; q < b.qubits(); ++q) m[q] = (((b.mask() >> q) & 1U) != 0) == in_a;
  return m;
}

// rho_A = Tr_Abar |psi><psi| by summing over all pairs (j, l) that agree on Abar.
inline std::vector<std::vector<cplx>> reduced_density(const PureState& s, const Bipartition& b) {
  const int n = s.qubits();
  const auto in_a = membership(b, true);
  const auto in_c = membership(b, false);
  const std::size_t da = std::size_t{1} << b.size_a();
  std::vector<std::vector<cplx>> rho(da, std::vector<cplx>(da));
  for (std::size_t j = 0; j < s.dim(); ++j) {
    for (std::size_t l = 0; l < s.dim(); ++l) {
      if (substring(j, n, in_c) != substring(l, n, in_c)) continue;
      rho[substring(j, n, in_a)][substring(l, n, in_a)] += s[j] * std::conj(s[l]);
    }
  }
  return rho;
}

// Tr rho_A^2 with an explicit matrix product.
inline double purity(const PureState& s, const Bipartition& b) {
  const auto rho = reduced_density(s, b);
  cplx tr = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    for (std::size_t k = 0; k < rho.size(); ++k) tr += rho[i][k] * rho[k][i];
  }
  return tr.real();
}

// The quartic sum over j_A, l_A, j_Abar, l_Abar, term by term.
inline double quartic_purity(const PureState& s, const Bipartition& b) {
  const int n = s.qubits();
  const std::size_t da = std::size_t{1} << b.size_a();
  const std::size_t dc = std::size_t{1} << b.size_complement();
  const auto in_a = membership(b, true);
  const auto in_c = membership(b, false);
  std::vector<cplx> m(da * dc);
  for (std::size_t j = 0; j < s.dim(); ++j) m[substring(j, n, in_a) * dc + substring(j, n, in_c)] = s[j];
  cplx sum = 0.0;
  for (std::size_t ja = 0; ja < da; ++ja)
    for (std::size_t la = 0; la < da; ++la)
      for (std::size_t jc = 0; jc < dc; ++jc)
        for (std::size_t lc = 0; lc < dc; ++lc)
          sum += m[ja * dc + jc] * std::conj(m[la * dc + jc]) * m[la * dc + lc] * std::conj(m[ja * dc + lc]);
  return sum.real();
}

// Average over all subsets of size floor(n/2), enumerated independently.
inline double potential(const PureState& s) {
  const int n = s.qubits();
  double sum = 0.0;
  int count = 0;
  for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << n); ++mask) {
    if (__builtin_popcountll(mask) != n / 2) continue;
    sum += oracle::purity(s, Bipartition::from_mask(n, mask));
    ++count;
  }
  return sum / count;
}

inline PureState random_state(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<cplx> z(std::size_t{1} << n);
  for (auto& c : z) c = {g(rng), g(rng)};
  return PureState::normalized(n, std::move(z));
}

inline Matrix2 random_unitary(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * 3.14159265358979323846);
  const double theta = u(rng) / 4.0, a = u(rng), b = u(rng), c = u(rng);
  const cplx ea = std::polar(1.0, a), eb = std::polar(1.0, b), ec = std::polar(1.0, c);
  return {{{ec * ea * std::cos(theta), ec * eb * std::sin(theta)},
           {-ec * std::conj(eb) * std::sin(theta), ec * std::conj(ea) * std::cos(theta)}}};
}

}  // namespace mmes::oracle
