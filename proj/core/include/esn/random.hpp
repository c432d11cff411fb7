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

#ifndef ESN_RANDOM_HPP_
#define ESN_RANDOM_HPP_

#include <cmath>
#include <cstdint>
#include <vector>

namespace esn {

// splitmix64 step. Fully specified, so seeded results are identical on
// every platform (std::normal_distribution is not).
inline uint64_t splitmix64(uint64_t* state) {
  uint64_t z = (*state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Mixes a base seed with stream indices, for handing independent
// deterministic streams to sub-tasks (per epoch, per candidate, ...).
inline uint64_t derive_seed(uint64_t base, uint64_t a, uint64_t b = 0) {
  uint64_t s = base ^ (0x6a09e667f3bcc909ULL + a * 0x9e3779b97f4a7c15ULL);
  splitmix64(&s);
  s ^= 0xbb67ae8584caa73bULL + b * 0xc2b2ae3d27d4eb4fULL;
  splitmix64(&s);
  return splitmix64(&s);
}

class Prng {
 public:
  explicit Prng(uint64_t seed) : state_(seed) {
    // decorrelate trivially close seeds
    splitmix64(&state_);
  }

  uint64_t next_u64() { return splitmix64(&state_); }

  // uniform in [0, 1), 53-bit resolution
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // uniform integer in [0, bound)
  uint32_t uniform_int(uint32_t bound) {
    return bound == 0 ? 0 : static_cast<uint32_t>(next_u64() % bound);
  }

  // standard normal via Box-Muller
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  template <typename T>
  void shuffle(std::vector<T>* v) {
    for (size_t i = v->size(); i > 1; --i) {
      size_t j = uniform_int(static_cast<uint32_t>(i));
      std::swap((*v)[i - 1], (*v)[j]);
    }
  }

 private:
  uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace esn

#endif  // ESN_RANDOM_HPP_
