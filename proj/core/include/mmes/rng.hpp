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
#include <random>

namespace mmes {

using Rng = std::mt19937_64;

// SplitMix64 finalizer; used to decorrelate (seed, stream) pairs.
std::uint64_t mix64(std::uint64_t x) noexcept;

// Independent generator for stream `stream` of master seed `seed`. Every
// chain, restart or sample batch draws from its own stream so that results
// do not depend on how work is scheduled across threads.
Rng make_stream(std::uint64_t seed, std::uint64_t stream);

// Fresh nondeterministic seed, for runs where the user did not pin one.
std::uint64_t random_seed();

}  // namespace mmes
