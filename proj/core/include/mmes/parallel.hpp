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
#include <functional>

namespace mmes {

// Number of worker threads used when a caller passes threads = 0.
// Honours MMES_THREADS, falling back to std::thread::hardware_concurrency().
unsigned default_threads();

// Runs body(i) for i in [0, count) on up to `threads` workers (0 = default).
// Indices are claimed dynamically; callers write results into per-index
// slots so the outcome is independent of the thread count. The first
// exception thrown by any body is rethrown on the calling thread.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace mmes
