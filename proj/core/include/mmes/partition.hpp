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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mmes/qstate.hpp"

namespace mmes {

// Split of n qubits into A and its complement. Bit i of `mask` is set when
// qubit i belongs to A (qubit 0 is the most significant bit of a basis
// index, see PureState).
class Bipartition {
 public:
  // Both parts must be non-empty.
  static Bipartition from_mask(int n, std::uint64_t mask);
  static Bipartition from_qubits(int n, const std::vector<int>& qubits);
  // "0,2,3" is a qubit list; "mask:13", "0b1101" and "0xd" are bitmasks.
  static Bipartition parse(int n, std::string_view text);

  int qubits() const noexcept { return n_; }
  std::uint64_t mask() const noexcept { return mask_; }
  int size_a() const noexcept;
  int size_complement() const noexcept { return n_ - size_a(); }
  std::uint64_t dim_a() const noexcept { return std::uint64_t{1} << size_a(); }
  std::uint64_t dim_complement() const noexcept { return std::uint64_t{1} << size_complement(); }
  bool balanced() const noexcept { return size_a() == n_ / 2; }
  bool contains(int qubit) const noexcept { return (mask_ >> qubit) & 1U; }
  Bipartition complement() const;
  std::vector<int> members() const;
  std::string to_string() const;

  friend bool operator==(const Bipartition&, const Bipartition&) = default;

 private:
  Bipartition(int n, std::uint64_t mask) : n_(n), mask_(mask) {}

  int n_;
  std::uint64_t mask_;
};

// All subsets of size floor(n/2), in increasing mask order. For even n a
// subset and its complement both appear.
std::vector<Bipartition> balanced_bipartitions(int n);

// Number of balanced bipartitions, C(n, floor(n/2)).
std::uint64_t balanced_count(int n);

struct SplitIndex {
  std::uint64_t a;
  std::uint64_t complement;
  friend bool operator==(const SplitIndex&, const SplitIndex&) = default;
};

// j -> (j_A, j_Abar): the bits of j on A (resp. the complement), in
// increasing qubit order, read as binary numbers with the lowest qubit most
// significant.
SplitIndex split_index(std::uint64_t j, const Bipartition& b);
// Inverse of split_index.
std::uint64_t join_index(SplitIndex parts, const Bipartition& b);

// Per-bipartition lookup tables j -> j_A and j -> j_Abar over all 2^n basis
// indices. Read-only after construction; safe to share across threads.
struct IndexTables {
  std::vector<std::uint32_t> row;
  std::vector<std::uint32_t> col;
};

IndexTables make_index_tables(const Bipartition& b);

// Dense N_A x N_Abar matrix, row-major.
struct ReshapedState {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<cplx> data;

  const cplx& operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

// M[j_A][j_Abar] = z_j.
ReshapedState reshape(const PureState& state, const Bipartition& b);

}  // namespace mmes
