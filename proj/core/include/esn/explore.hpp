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

#ifndef ESN_EXPLORE_HPP_
#define ESN_EXPLORE_HPP_

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "esn/arch.hpp"
#include "esn/train.hpp"

namespace esn {

// Hard feasibility constraints a candidate must satisfy.
struct Requirements {
  double min_val_accuracy = 0.95;
  std::optional<int64_t> max_params;
  std::optional<int64_t> max_macs;
};

// Accuracy/resource trade-off score:
//   score = scale * log10( accuracy^kappa / (params_M^beta * macs_M^gamma) )
// with parameters and MACs in millions, floored at 1e-6 M.
struct UConfig {
  double kappa = 2.0;
  double beta = 0.5;
  double gamma = 0.5;
  double scale = 20.0;
};

struct Metrics {
  double val_accuracy = 0.0;
  int64_t param_count = 0;
  int64_t mac_count = 0;
};

// InvalidMetrics on non-positive accuracy, accuracy > 1, or negative counts.
double universal_performance(const Metrics& metrics, const UConfig& ucfg);

// Multiply-accumulates of one forward pass: m*r*C_in*C_out*H*W per conv
// row, in_features*out_features for the dense row, zero for pooling and
// softmax. InvalidShape when a spatial dimension is empty.
int64_t estimate_macs(const ArchitectureSpec& spec,
                      std::array<int, 3> input_shape);

struct WidthDistribution {
  double mean = 0.0;
  double spread = 0.0;
};

// Sampling state for the architecture generator: the structural skeleton
// comes from the prototype, bottleneck widths and block count are sampled.
struct GeneratorState {
  ArchitectureSpec base_spec;
  std::vector<WidthDistribution> widths;  // per block position
  int min_blocks = 1;
  int max_blocks = 1;
  int generation = 0;
};

// Width distributions centered on the prototype's narrow widths with the
// given relative spread; the block-count range is the prototype's +/- 2.
GeneratorState make_generator_state(const ArchitectureSpec& prototype,
                                    double relative_spread = 0.25);

// Samples a block count and per-block narrow widths (rounded, clamped to
// [1, wide-1]) while keeping the prototype's stem, wide width, tail,
// pooling, dense and softmax structure. Deterministic per (state, seed).
ArchitectureSpec generate(const GeneratorState& state, uint64_t seed);

struct Candidate {
  ArchitectureSpec spec;
  uint64_t seed = 0;
  int generation = 0;
  Metrics metrics;
  double u_score = 0.0;
};

struct ExploreBudget {
  int generations = 5;
  int candidates_per_gen = 8;
  int survivors_per_gen = 5;
  double spread_shrink = 0.7;
};

// Maps a candidate spec (and its build seed) to a validation accuracy.
// Production use trains a network; tests may inject closed-form stand-ins.
using Evaluator =
    std::function<double(const ArchitectureSpec& spec, uint64_t seed)>;

// Progressive search honoring the constrained-maximization contract: per
// generation, sample candidates, drop those failing the requirements,
// re-center the width distributions on the best survivor and shrink the
// spread. Returns all survivors sorted by score, best first; every one
// satisfies the requirements, and the best score never degrades across
// generations. Throws NoFeasibleCandidate (with the best infeasible
// accuracy) when nothing survives.
std::vector<Candidate> explore(const ArchitectureSpec& prototype,
                               const Requirements& reqs, const UConfig& ucfg,
                               const ExploreBudget& budget,
                               uint64_t master_seed, const Evaluator& eval);

// Evaluator that builds the spec and trains it on the given sets.
Evaluator make_training_evaluator(const Dataset& train_set,
                                  const Dataset& val_set, TrainConfig cfg);

}  // namespace esn

#endif  // ESN_EXPLORE_HPP_
