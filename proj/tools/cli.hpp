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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mmes::cli {

// Flags shared across subcommands. Unset optionals fall back to the owning
// module's defaults.
struct RunConfig {
  std::string command;
  int n = 0;
  std::optional<double> beta;
  double beta0 = 0.0;
  std::vector<double> betas;
  std::optional<std::size_t> steps;
  std::optional<std::size_t> burn_in;
  std::size_t thin = 1;
  std::optional<std::uint64_t> seed;
  std::size_t chains = 1;
  std::optional<double> step_size;
  std::size_t restarts = 8;
  double beta_start = 1.0;
  double beta_end = 1e5;
  std::size_t levels = 60;
  std::size_t sweeps = 2000;
  bool linear = false;
  bool no_polish = false;
  std::string direction = "min";
  std::string in;
  std::string out;
  std::string state_out;
  std::string format;
  std::string partition;
  std::size_t bins = 100;
  std::size_t samples = 1;
  int order = 4;
  unsigned threads = 0;
};

// Runs one subcommand. Returns 0 on success, 1 on a runtime error and 2 on a
// usage error (after printing help to err).
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mmes::cli
