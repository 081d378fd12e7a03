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

#include "mmes/qstate.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "mmes/errors.hpp"

namespace mmes {
namespace {

std::atomic<int> g_max_qubits{0};

int max_qubits_from_env() {
  if (const char* env = std::getenv("MMES_MAX_N")) {
    try {
      const int v = std::stoi(env);
      if (v >= 2) return v;
    } catch (...) {
    }
  }
  return kDefaultMaxQubits;
}

double sum_norm(std::span<const cplx> z) {
  double s = 0.0;
  for (const auto& c : z) s += std::norm(c);
  return s;
}

void check_dimension(int n, std::size_t size) {
  check_qubit_count(n);
  if (size != (std::size_t{1} << n)) {
    throw DomainError("expected 2^" + std::to_string(n) + " amplitudes, got " +
                      std::to_string(size));
  }
}

void put_u32(std::vector<std::byte>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::byte>((v >> (8 * i)) & 0xff));
}

void put_f64(std::vector<std::byte>& out, double d) {
  const auto v = std::bit_cast<std::uint64_t>(d);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::byte>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_le(std::span<const std::byte> bytes, std::size_t offset, int width) {
  std::uint64_t v = 0;
  for (int i = 0; i < width; ++i) {
    v |= static_cast<std::uint64_t>(std::to_integer<unsigned>(bytes[offset + i])) << (8 * i);
  }
  return v;
}

constexpr std::array<char, 4> kMagic{'M', 'M', 'E', 'S'};

}  // namespace

int max_qubits() {
  const int v = g_max_qubits.load();
  return v > 0 ? v : max_qubits_from_env();
}

void set_max_qubits(int n) {
  if (n < 2) throw DomainError("maximum qubit count must be at least 2");
  g_max_qubits.store(n);
}

void check_qubit_count(int n) {
  if (n < 2) throw DomainError("qubit count must be >= 2, got " + std::to_string(n));
  if (n > max_qubits()) {
    throw ResourceError("qubit count " + std::to_string(n) + " exceeds the configured maximum " +
                        std::to_string(max_qubits()) + " (set MMES_MAX_N to raise it)");
  }
}

PureState PureState::from_amplitudes(int n, std::vector<cplx> amplitudes, double tol) {
  check_dimension(n, amplitudes.size());
  const double s = sum_norm(amplitudes);
  if (!std::isfinite(s)) throw NumericalError("non-finite amplitude");
  if (std::abs(s - 1.0) > tol) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "state is not normalized: sum |z|^2 = " << s;
    throw ValidationError(msg.str());
  }
  return PureState(n, std::move(amplitudes));
}

PureState PureState::normalized(int n, std::vector<cplx> amplitudes) {
  check_dimension(n, amplitudes.size());
  const double s = sum_norm(amplitudes);
  if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("cannot normalize a zero or non-finite vector");
  const double inv = 1.0 / std::sqrt(s);
  for (auto& c : amplitudes) c *= inv;
  return PureState(n, std::move(amplitudes));
}

PureState PureState::basis(int n, std::uint64_t index) {
  check_qubit_count(n);
  if (index >= (std::uint64_t{1} << n)) throw DomainError("basis index out of range");
  std::vector<cplx> z(std::size_t{1} << n);
  z[index] = 1.0;
  return PureState(n, std::move(z));
}

PureState PureState::ghz(int n) {
  check_qubit_count(n);
  std::vector<cplx> z(std::size_t{1} << n);
  z.front() = z.back() = std::sqrt(0.5);
  return PureState(n, std::move(z));
}

PureState PureState::w(int n) {
  check_qubit_count(n);
  std::vector<cplx> z(std::size_t{1} << n);
  const double a = 1.0 / std::sqrt(static_cast<double>(n));
  for (int q = 0; q < n; ++q) z[std::size_t{1} << q] = a;
  return PureState(n, std::move(z));
}

double PureState::norm_squared() const noexcept { return sum_norm(amplitudes_); }

void haar_fill(std::span<cplx> out, Rng& rng) {
  std::normal_distribution<double> normal;
  double s = 0.0;
  for (auto& c : out) {
    const double re = normal(rng);
    const double im = normal(rng);
    c = {re, im};
    s += re * re + im * im;
  }
  const double inv = 1.0 / std::sqrt(s);
  for (auto& c : out) c *= inv;
}

PureState haar_sample(int n, Rng& rng) {
  check_qubit_count(n);
  std::vector<cplx> z(std::size_t{1} << n);
  haar_fill(z, rng);
  return PureState::from_amplitudes(n, std::move(z));
}

PureState haar_sample(int n, std::uint64_t seed) {
  check_qubit_count(n);
  Rng rng = make_stream(seed, 0);
  return haar_sample(n, rng);
}

void perturb_into(std::span<const cplx> in, double step, Rng& rng, std::span<cplx> out) {
  if (!(step > 0.0)) throw DomainError("perturbation step must be positive");
  if (in.size() != out.size()) throw DomainError("perturb buffer size mismatch");
  std::normal_distribution<double> normal;
  double s = 0.0;
  for (std::size_t j = 0; j < in.size(); ++j) {
    const double re = in[j].real() + step * normal(rng);
    const double im = in[j].imag() + step * normal(rng);
    out[j] = {re, im};
    s += re * re + im * im;
  }
  const double inv = 1.0 / std::sqrt(s);
  for (auto& c : out) c *= inv;
}

PureState perturb(const PureState& state, double step, Rng& rng) {
  std::vector<cplx> z(state.dim());
  perturb_into(state.amplitudes(), step, rng, z);
  return PureState::from_amplitudes(state.qubits(), std::move(z));
}

double fidelity(const PureState& a, const PureState& b) {
  if (a.dim() != b.dim()) throw DomainError("fidelity of states with different dimensions");
  cplx overlap = 0.0;
  for (std::size_t j = 0; j < a.dim(); ++j) overlap += std::conj(a[j]) * b[j];
  return std::norm(overlap);
}

PureState apply_local_unitary(const PureState& state, int qubit, const Matrix2& u) {
  const int n = state.qubits();
  if (qubit < 0 || qubit >= n) throw DomainError("qubit index out of range");
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      cplx dot = std::conj(u[0][r]) * u[0][c] + std::conj(u[1][r]) * u[1][c];
      if (std::abs(dot - (r == c ? 1.0 : 0.0)) > 1e-10) {
        throw ValidationError("matrix is not unitary within 1e-10");
      }
    }
  }
  const std::size_t stride = std::size_t{1} << (n - 1 - qubit);
  std::vector<cplx> z(state.amplitudes().begin(), state.amplitudes().end());
  for (std::size_t j = 0; j < z.size(); ++j) {
    if (j & stride) continue;
    const cplx a0 = z[j];
    const cplx a1 = z[j | stride];
    z[j] = u[0][0] * a0 + u[0][1] * a1;
    z[j | stride] = u[1][0] * a0 + u[1][1] * a1;
  }
  return PureState::from_amplitudes(n, std::move(z), 1e-10);
}

PureState apply_global_phase(const PureState& state, double phase) {
  const cplx f = std::polar(1.0, phase);
  std::vector<cplx> z(state.amplitudes().begin(), state.amplitudes().end());
  for (auto& c : z) c *= f;
  return PureState::from_amplitudes(state.qubits(), std::move(z));
}

std::string to_json(const PureState& state) {
  nlohmann::json amps = nlohmann::json::array();
  for (const auto& c : state.amplitudes()) amps.push_back({c.real(), c.imag()});
  nlohmann::json doc;
  doc["n"] = state.qubits();
  doc["amplitudes"] = std::move(amps);
  return doc.dump();
}

PureState from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("invalid JSON state: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("amplitudes") ||
      !doc["n"].is_number_integer() || !doc["amplitudes"].is_array()) {
    throw FormatError("JSON state must be an object with integer \"n\" and array \"amplitudes\"");
  }
  const int n = doc["n"].get<int>();
  if (n < 2 || n > max_qubits()) throw FormatError("JSON state has unsupported n");
  const auto& amps = doc["amplitudes"];
  if (amps.size() != (std::size_t{1} << n)) throw FormatError("JSON state length does not match 2^n");
  std::vector<cplx> z;
  z.reserve(amps.size());
  for (const auto& pair : amps) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
      throw FormatError("each amplitude must be a [re, im] pair");
    }
    z.emplace_back(pair[0].get<double>(), pair[1].get<double>());
  }
  const double s = sum_norm(z);
  if (!(std::abs(s - 1.0) <= kFileNormTolerance)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "norm violation: sum |z|^2 = " << s;
    throw FormatError(msg.str());
  }
  return PureState::from_amplitudes(n, std::move(z), kFileNormTolerance);
}

std::vector<std::byte> to_binary(const PureState& state) {
  std::vector<std::byte> out;
  out.reserve(12 + 16 * state.dim());
  for (char c : kMagic) out.push_back(static_cast<std::byte>(c));
  put_u32(out, kBinaryVersion);
  put_u32(out, static_cast<std::uint32_t>(state.qubits()));
  for (const auto& c : state.amplitudes()) {
    put_f64(out, c.real());
    put_f64(out, c.imag());
  }
  return out;
}

PureState from_binary(std::span<const std::byte> bytes) {
  if (bytes.size() < 12) throw FormatError("binary state shorter than its header");
  for (std::size_t i = 0; i < kMagic.size(); ++i) {
    if (static_cast<char>(bytes[i]) != kMagic[i]) throw FormatError("bad magic bytes");
  }
  const auto version = static_cast<std::uint32_t>(get_le(bytes, 4, 4));
  if (version != kBinaryVersion) throw FormatError("unsupported binary version " + std::to_string(version));
  const auto n = static_cast<std::uint32_t>(get_le(bytes, 8, 4));
  if (n < 2 || n > static_cast<std::uint32_t>(max_qubits())) throw FormatError("binary state has unsupported n");
  const std::size_t dim = std::size_t{1} << n;
  if (bytes.size() != 12 + 16 * dim) throw FormatError("binary state length mismatch");
  std::vector<cplx> z(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    const double re = std::bit_cast<double>(get_le(bytes, 12 + 16 * j, 8));
    const double im = std::bit_cast<double>(get_le(bytes, 20 + 16 * j, 8));
    z[j] = {re, im};
  }
  const double s = sum_norm(z);
  if (!(std::abs(s - 1.0) <= kFileNormTolerance)) throw FormatError("norm violation in binary state");
  return PureState::from_amplitudes(static_cast<int>(n), std::move(z), kFileNormTolerance);
}

void save_state(const PureState& state, const std::string& path, StateFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  if (format == StateFormat::Json) {
    out << to_json(state) << '\n';
  } else {
    const auto bytes = to_binary(state);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  }
  if (!out) throw Error("failed writing " + path);
}

PureState load_state(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (raw.size() >= 4 && std::equal(kMagic.begin(), kMagic.end(), raw.begin())) {
    return from_binary(std::as_bytes(std::span<const char>(raw)));
  }
  return from_json(std::string_view(raw.data(), raw.size()));
}

}  // namespace mmes
