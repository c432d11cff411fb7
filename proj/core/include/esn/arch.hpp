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

#ifndef ESN_ARCH_HPP_
#define ESN_ARCH_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "esn/network.hpp"

namespace esn {

enum class LayerKind { kConv, kAvgPool, kDense, kSoftmax };

// One row of an architecture table. Conv rows use m x r kernels with n
// output channels; dense rows use n output features; avg-pool rows with
// pool_h == pool_w == 0 pool globally. expected_params carries a reference
// parameter count for the verifier when one is known.
struct LayerSpec {
  LayerKind kind = LayerKind::kConv;
  int m = 0, r = 0, n = 0;
  int pool_h = 0, pool_w = 0;
  std::optional<int64_t> expected_params;

  bool operator==(const LayerSpec&) const = default;
};

struct ArchitectureSpec {
  std::string name;
  std::array<int, 3> input = {1, 98, 40};  // channels, frames, coefficients
  std::vector<LayerSpec> layers;

  bool operator==(const ArchitectureSpec&) const = default;
};

// Builders for the published EdgeSpeechNet variants. Accepts "A".."D" or
// "EdgeSpeechNet-A".."-D"; anything else is UnknownArchitecture.
ArchitectureSpec builtin_spec(const std::string& name);
bool is_builtin(const std::string& name);

// Wide-narrow-wide grouping of the conv rows: a stem conv that sets the
// wide width, bottleneck pairs (narrow conv then a conv restoring the wide
// width) that get identity skips, and tail convs with no skip.
struct ResidualTopology {
  int stem = -1;                              // layer index of the stem conv
  std::vector<std::pair<int, int>> blocks;    // (narrow, wide) layer indices
  std::vector<int> tail;                      // remaining conv layer indices
};
ResidualTopology infer_residual_topology(const ArchitectureSpec& spec);

// Throws MalformedSpec unless: first layer is a conv, the last two layers
// are dense then softmax, channel chaining is consistent, and the dense
// layer is fed by a global average pool.
void validate_spec(const ArchitectureSpec& spec);

// Instantiates the spec: a batch-normalized conv per conv row, skips per
// the inferred topology, He-initialized from a deterministic PRNG.
// Identical (spec, seed) gives bit-identical networks.
Network build_network(const ArchitectureSpec& spec, uint64_t seed);

struct ParamRow {
  int layer_index = 0;
  LayerKind kind = LayerKind::kConv;
  int m = 0, r = 0, n = 0;
  int64_t computed = 0;
  std::optional<int64_t> expected;
  bool match = true;
};
struct ParamReport {
  std::vector<ParamRow> rows;
  int64_t total_computed = 0;
  std::optional<int64_t> total_expected;
  bool all_match = true;
};

// Per-row weight-only parameter counts, checked against any expected
// values carried by the spec. Mismatches are report content, not errors.
ParamReport verify_params(const ArchitectureSpec& spec);

// JSON round trip; unknown fields are rejected (ParseError).
std::string serialize_spec(const ArchitectureSpec& spec);
ArchitectureSpec parse_spec(const std::string& json_text);
ArchitectureSpec load_spec_file(const std::string& path);
void save_spec_file(const std::string& path, const ArchitectureSpec& spec);

}  // namespace esn

#endif  // ESN_ARCH_HPP_
