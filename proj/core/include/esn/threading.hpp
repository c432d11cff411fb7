// Copyright (c) 2026 The edgespeechnet-cpp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ESN_THREADING_HPP_
#define ESN_THREADING_HPP_

#include <cstdint>
#include <functional>

namespace esn {

// Worker cap: min(hardware threads, ESN_THREADS env var). At least 1.
int max_workers();

// Runs fn(i) for i in [0, n). Work is split into contiguous static chunks,
// one per worker, so the assignment of indices to threads is deterministic.
// Callers that reduce results must do so in index order to stay bit-stable
// across worker counts.
void parallel_for(int64_t n, const std::function<void(int64_t)>& fn);

}  // namespace esn

#endif  // ESN_THREADING_HPP_
