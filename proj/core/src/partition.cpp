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

#include "mmes/partition.hpp"

#include <bit>
#include <charconv>
#include <sstream>

#include "mmes/errors.hpp"

namespace mmes {
namespace {

// Extracts the bits of j selected by `qubit_mask` (qubit q <-> bit n-1-q),
// lowest qubit first, i.e. as the most significant output bit.
std::uint64_t gather_bits(std::uint64_t j, std::uint64_t qubit_mask, int n) {
  std::uint64_t out = 0;
  for (int q = 0; q < n; ++q) {
    if ((qubit_mask >> q) & 1U) out = (out << 1) | ((j >> (n - 1 - q)) & 1U);
  }
  return out;
}

std::uint64_t scatter_bits(std::uint64_t value, std::uint64_t qubit_mask, int n) {
  std::uint64_t out = 0;
  int remaining = std::popcount(qubit_mask);
  for (int q = 0; q < n; ++q) {
    if ((qubit_mask >> q) & 1U) {
      --remaining;
      out |= ((value >> remaining) & 1U) << (n - 1 - q);
    }
  }
  return out;
}

std::uint64_t full_mask(int n) { return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1; }

std::uint64_t parse_unsigned(std::string_view s, int base) {
  std::uint64_t v = 0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v, base);
  if (ec != std::errc() || ptr != last || s.empty()) {
    throw DomainError("cannot parse partition '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

Bipartition Bipartition::from_mask(int n, std::uint64_t mask) {
  if (n < 2 || n > 63) throw DomainError("bipartition needs 2 <= n <= 63");
  if ((mask & ~full_mask(n)) != 0) throw DomainError("bipartition mask has bits beyond n");
  const int k = std::popcount(mask);
  if (k < 1 || k > n - 1) throw DomainError("bipartition parts must both be non-empty");
  return Bipartition(n, mask);
}

Bipartition Bipartition::from_qubits(int n, const std::vector<int>& qubits) {
  std::uint64_t mask = 0;
  for (int q : qubits) {
    if (q < 0 || q >= n) throw DomainError("qubit " + std::to_string(q) + " out of range");
    if ((mask >> q) & 1U) throw DomainError("qubit " + std::to_string(q) + " listed twice");
    mask |= std::uint64_t{1} << q;
  }
  return from_mask(n, mask);
}

Bipartition Bipartition::parse(int n, std::string_view text) {
  if (text.starts_with("mask:")) return from_mask(n, parse_unsigned(text.substr(5), 10));
  if (text.starts_with("0x") || text.starts_with("0X")) return from_mask(n, parse_unsigned(text.substr(2), 16));
  if (text.starts_with("0b") || text.starts_with("0B")) return from_mask(n, parse_unsigned(text.substr(2), 2));
  std::vector<int> qubits;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto token = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    qubits.push_back(static_cast<int>(parse_unsigned(token, 10)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return from_qubits(n, qubits);
}

int Bipartition::size_a() const noexcept { return std::popcount(mask_); }

Bipartition Bipartition::complement() const { return Bipartition(n_, ~mask_ & full_mask(n_)); }

std::vector<int> Bipartition::members() const {
  std::vector<int> out;
  for (int q = 0; q < n_; ++q) {
    if (contains(q)) out.push_back(q);
  }
  return out;
}

std::string Bipartition::to_string() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (int q : members()) {
    if (!first) os << ',';
    os << q;
    first = false;
  }
  os << '}';
  return os.str();
}

std::uint64_t balanced_count(int n) {
  if (n < 2) throw DomainError("balanced bipartitions need n >= 2");
  const int k = n / 2;
  std::uint64_t c = 1;
  for (int i = 1; i <= k; ++i) c = c * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return c;
}

std::vector<Bipartition> balanced_bipartitions(int n) {
  if (n < 2) throw DomainError("balanced bipartitions need n >= 2");
  if (n > 63) throw DomainError("balanced bipartitions need n <= 63");
  const int k = n / 2;
  std::vector<Bipartition> out;
  out.reserve(balanced_count(n));
  // Gosper's hack walks the k-subsets in increasing numeric order.
  std::uint64_t mask = (std::uint64_t{1} << k) - 1;
  const std::uint64_t limit = std::uint64_t{1} << n;
  while (mask < limit) {
    out.push_back(Bipartition::from_mask(n, mask));
    const std::uint64_t c = mask & (~mask + 1);
    const std::uint64_t r = mask + c;
    mask = (((r ^ mask) >> 2) / c) | r;
  }
  return out;
}

SplitIndex split_index(std::uint64_t j, const Bipartition& b) {
  const int n = b.qubits();
  if (j >> n) throw DomainError("basis index out of range");
  return {gather_bits(j, b.mask(), n), gather_bits(j, b.complement().mask(), n)};
}

std::uint64_t join_index(SplitIndex parts, const Bipartition& b) {
  if (parts.a >= b.dim_a() || parts.complement >= b.dim_complement()) {
    throw DomainError("split index out of range");
  }
  const int n = b.qubits();
  return scatter_bits(parts.a, b.mask(), n) | scatter_bits(parts.complement, b.complement().mask(), n);
}

IndexTables make_index_tables(const Bipartition& b) {
  const int n = b.qubits();
  if (n > 31) throw ResourceError("index tables limited to n <= 31");
  const std::size_t dim = std::size_t{1} << n;
  IndexTables t;
  t.row.resize(dim);
  t.col.resize(dim);
  // Build per-qubit contributions, then combine: each table is a sum over
  // bits of j, so incremental construction avoids the O(n) gather per index.
  const std::uint64_t comp = b.complement().mask();
  std::vector<std::uint32_t> row_bit(n), col_bit(n);
  int ra = b.size_a();
  int rc = b.size_complement();
  for (int q = 0; q < n; ++q) {
    if (b.contains(q)) {
      row_bit[n - 1 - q] = std::uint32_t{1} << --ra;
    } else if ((comp >> q) & 1U) {
      col_bit[n - 1 - q] = std::uint32_t{1} << --rc;
    }
  }
  t.row[0] = t.col[0] = 0;
  for (std::size_t j = 1; j < dim; ++j) {
    const int low = std::countr_zero(j);
    const std::size_t prev = j & (j - 1);
    t.row[j] = t.row[prev] + row_bit[low];
    t.col[j] = t.col[prev] + col_bit[low];
  }
  return t;
}

ReshapedState reshape(const PureState& state, const Bipartition& b) {
  if (state.qubits() != b.qubits()) throw DomainError("state and bipartition disagree on n");
  const auto t = make_index_tables(b);
  ReshapedState m;
  m.rows = b.dim_a();
  m.cols = b.dim_complement();
  m.data.assign(state.dim(), cplx{});
  const auto z = state.amplitudes();
  for (std::size_t j = 0; j < z.size(); ++j) m.data[t.row[j] * m.cols + t.col[j]] = z[j];
  return m;
}

}  // namespace mmes
