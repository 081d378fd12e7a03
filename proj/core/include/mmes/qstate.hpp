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

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mmes/rng.hpp"

namespace mmes {

using cplx = std::complex<double>;
using Matrix2 = std::array<std::array<cplx, 2>, 2>;

// Norm tolerance for states produced in memory.
inline constexpr double kNormTolerance = 1e-12;
// Norm tolerance for states read from files (decimal round-off).
inline constexpr double kFileNormTolerance = 1e-9;
inline constexpr int kDefaultMaxQubits = 20;

// Largest qubit count accepted by state constructors. Defaults to 20 and can
// be raised with the MMES_MAX_N environment variable or set_max_qubits().
int max_qubits();
void set_max_qubits(int n);

// Normalized pure state of n qubits. Amplitude j belongs to the basis state
// |j_0 j_1 ... j_{n-1}> where qubit 0 is the most significant bit of j.
// Immutable once constructed.
class PureState {
 public:
  // Validates length 2^n and |sum |z|^2 - 1| <= tol.
  static PureState from_amplitudes(int n, std::vector<cplx> amplitudes,
                                   double tol = kNormTolerance);
  // Rescales an arbitrary non-zero vector onto the unit sphere.
  static PureState normalized(int n, std::vector<cplx> amplitudes);

  static PureState basis(int n, std::uint64_t index);
  // (|0...0> + |1...1>)/sqrt(2)
  static PureState ghz(int n);
  // Equal superposition of all weight-one basis states.
  static PureState w(int n);

  int qubits() const noexcept { return n_; }
  std::size_t dim() const noexcept { return amplitudes_.size(); }
  std::span<const cplx> amplitudes() const noexcept { return amplitudes_; }
  const cplx& operator[](std::size_t j) const { return amplitudes_[j]; }
  double norm_squared() const noexcept;

  friend bool operator==(const PureState&, const PureState&) = default;

 private:
  PureState(int n, std::vector<cplx> amplitudes)
      : n_(n), amplitudes_(std::move(amplitudes)) {}

  int n_;
  std::vector<cplx> amplitudes_;
};

// Throws DomainError for n < 2 and ResourceError above max_qubits().
void check_qubit_count(int n);

// Uniform (unitarily invariant) random state: 2^{n+1} independent standard
// normals as real and imaginary parts, then normalized.
PureState haar_sample(int n, std::uint64_t seed);
PureState haar_sample(int n, Rng& rng);
// Buffer form used in hot loops; out.size() fixes the dimension.
void haar_fill(std::span<cplx> out, Rng& rng);

// Symmetric random-walk proposal on the sphere: (z + step*xi)/|z + step*xi|.
PureState perturb(const PureState& state, double step, Rng& rng);
void perturb_into(std::span<const cplx> in, double step, Rng& rng, std::span<cplx> out);

// |<a|b>|^2
double fidelity(const PureState& a, const PureState& b);

// Applies the 2x2 unitary u to the tensor factor of `qubit`.
PureState apply_local_unitary(const PureState& state, int qubit, const Matrix2& u);

// Multiplies every amplitude by exp(i*phase).
PureState apply_global_phase(const PureState& state, double phase);

// JSON text: {"n": int, "amplitudes": [[re, im], ...]}.
std::string to_json(const PureState& state);
PureState from_json(std::string_view text);

// Binary: "MMES", u32 version, u32 n, 2^{n+1} doubles (re, im interleaved);
// everything little-endian.
inline constexpr std::uint32_t kBinaryVersion = 1;
std::vector<std::byte> to_binary(const PureState& state);
PureState from_binary(std::span<const std::byte> bytes);

enum class StateFormat { Json, Binary };

void save_state(const PureState& state, const std::string& path, StateFormat format);
// Detects the format from the leading magic bytes.
PureState load_state(const std::string& path);

}  // namespace mmes
