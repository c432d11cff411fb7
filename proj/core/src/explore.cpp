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

#include "esn/explore.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "esn/errors.hpp"
#include "esn/random.hpp"

namespace esn {

double universal_performance(const Metrics& metrics, const UConfig& ucfg) {
  if (metrics.val_accuracy <= 0.0 || metrics.val_accuracy > 1.0) {
    throw InvalidMetrics("accuracy must be in (0, 1], got " +
                         std::to_string(metrics.val_accuracy));
  }
  if (metrics.param_count < 0 || metrics.mac_count < 0) {
    throw InvalidMetrics("parameter and MAC counts must be non-negative");
  }
  const double params_m =
      std::max(static_cast<double>(metrics.param_count) / 1e6, 1e-6);
  const double macs_m =
      std::max(static_cast<double>(metrics.mac_count) / 1e6, 1e-6);
  return ucfg.scale *
         std::log10(std::pow(metrics.val_accuracy, ucfg.kappa) /
                    (std::pow(params_m, ucfg.beta) *
                     std::pow(macs_m, ucfg.gamma)));
}

int64_t estimate_macs(const ArchitectureSpec& spec,
                      std::array<int, 3> input_shape) {
  int channels = input_shape[0];
  int h = input_shape[1];
  int w = input_shape[2];
  if (channels < 1 || h < 1 || w < 1) {
    throw InvalidShape("input shape must be positive");
  }
  int64_t macs = 0;
  for (const LayerSpec& l : spec.layers) {
    switch (l.kind) {
      case LayerKind::kConv:
        macs += static_cast<int64_t>(l.m) * l.r * channels * l.n * h * w;
        channels = l.n;
        break;
      case LayerKind::kAvgPool:
        if (l.pool_h == 0) {
          h = 1;
          w = 1;
        } else {
          h = (h + l.pool_h - 1) / l.pool_h;
          w = (w + l.pool_w - 1) / l.pool_w;
        }
        break;
      case LayerKind::kDense:
        macs += static_cast<int64_t>(channels) * l.n;
        channels = l.n;
        break;
      case LayerKind::kSoftmax:
        break;
    }
    if (h < 1 || w < 1) {
      throw InvalidShape("spatial dimensions collapsed to zero");
    }
  }
  return macs;
}

GeneratorState make_generator_state(const ArchitectureSpec& prototype,
                                    double relative_spread) {
  const ResidualTopology topo = infer_residual_topology(prototype);
  GeneratorState state;
  state.base_spec = prototype;
  for (const auto& [narrow_idx, wide_idx] : topo.blocks) {
    const double mean = prototype.layers[narrow_idx].n;
    state.widths.push_back({mean, relative_spread * mean});
  }
  const int k = static_cast<int>(topo.blocks.size());
  state.min_blocks = std::max(1, k - 2);
  state.max_blocks = std::max(state.min_blocks, k + 2);
  return state;
}

ArchitectureSpec generate(const GeneratorState& state, uint64_t seed) {
  const ArchitectureSpec& base = state.base_spec;
  const ResidualTopology topo = infer_residual_topology(base);
  const int wide = base.layers[topo.stem].n;

  // Split the prototype into everything before the first block and
  // everything after the last; the block region gets resampled.
  size_t block_begin, block_end;
  if (!topo.blocks.empty()) {
    block_begin = static_cast<size_t>(topo.blocks.front().first);
    block_end = static_cast<size_t>(topo.blocks.back().second) + 1;
  } else {
    block_begin = static_cast<size_t>(topo.stem) + 1;
    block_end = block_begin;
  }

  Prng rng(seed);
  const int span = state.max_blocks - state.min_blocks + 1;
  const int block_count =
      state.min_blocks + static_cast<int>(rng.uniform_int(
                             static_cast<uint32_t>(span)));

  ArchitectureSpec spec;
  spec.name = base.name + "-g" + std::to_string(state.generation) + "-s" +
              std::to_string(seed);
  spec.input = base.input;
  for (size_t i = 0; i < block_begin; ++i) {
    spec.layers.push_back(base.layers[i]);
    spec.layers.back().expected_params.reset();
  }
  for (int b = 0; b < block_count; ++b) {
    // reuse the last distribution when the sampled depth exceeds the list
    const WidthDistribution dist =
        state.widths.empty()
            ? WidthDistribution{std::max(1.0, wide / 2.0), 0.0}
            : state.widths[std::min<size_t>(b, state.widths.size() - 1)];
    const double sampled = dist.mean + dist.spread * rng.gaussian();
    const int narrow = static_cast<int>(std::clamp<long long>(
        std::llround(sampled), 1, std::max(1, wide - 1)));

    LayerSpec narrow_row;
    narrow_row.kind = LayerKind::kConv;
    narrow_row.m = 3;
    narrow_row.r = 3;
    narrow_row.n = narrow;
    LayerSpec wide_row = narrow_row;
    wide_row.n = wide;
    spec.layers.push_back(narrow_row);
    spec.layers.push_back(wide_row);
  }
  for (size_t i = block_end; i < base.layers.size(); ++i) {
    spec.layers.push_back(base.layers[i]);
    spec.layers.back().expected_params.reset();
  }
  return spec;
}

std::vector<Candidate> explore(const ArchitectureSpec& prototype,
                               const Requirements& reqs, const UConfig& ucfg,
                               const ExploreBudget& budget,
                               uint64_t master_seed, const Evaluator& eval) {
  validate_spec(prototype);
  GeneratorState state = make_generator_state(prototype);

  std::vector<Candidate> pool;
  double best_infeasible_accuracy = 0.0;

  for (int gen = 0; gen < budget.generations; ++gen) {
    state.generation = gen;
    std::vector<Candidate> survivors;
    for (int i = 0; i < budget.candidates_per_gen; ++i) {
      Candidate cand;
      cand.seed = derive_seed(master_seed, static_cast<uint64_t>(gen),
                              static_cast<uint64_t>(i));
      cand.generation = gen;
      cand.spec = generate(state, cand.seed);

      cand.metrics.param_count = verify_params(cand.spec).total_computed;
      cand.metrics.mac_count = estimate_macs(cand.spec, cand.spec.input);
      cand.metrics.val_accuracy = eval(cand.spec, cand.seed);

      const bool feasible =
          cand.metrics.val_accuracy >= reqs.min_val_accuracy &&
          (!reqs.max_params ||
           cand.metrics.param_count <= *reqs.max_params) &&
          (!reqs.max_macs || cand.metrics.mac_count <= *reqs.max_macs);
      if (!feasible) {
        best_infeasible_accuracy =
            std::max(best_infeasible_accuracy, cand.metrics.val_accuracy);
        continue;
      }
      cand.u_score = universal_performance(cand.metrics, ucfg);
      survivors.push_back(std::move(cand));
    }

    std::sort(survivors.begin(), survivors.end(),
              [](const Candidate& a, const Candidate& b) {
                return a.u_score > b.u_score;
              });
    if (static_cast<int>(survivors.size()) > budget.survivors_per_gen) {
      survivors.resize(static_cast<size_t>(budget.survivors_per_gen));
    }
    pool.insert(pool.end(), survivors.begin(), survivors.end());

    // Refit the generator on the best candidate seen so far.
    if (!pool.empty()) {
      const Candidate* best = &pool.front();
      for (const auto& c : pool) {
        if (c.u_score > best->u_score) best = &c;
      }
      const ResidualTopology topo = infer_residual_topology(best->spec);
      for (size_t b = 0; b < topo.blocks.size(); ++b) {
        const double width = best->spec.layers[topo.blocks[b].first].n;
        if (b < state.widths.size()) {
          state.widths[b].mean = width;
        } else {
          state.widths.push_back(
              {width, state.widths.empty() ? 0.0
                                           : state.widths.back().spread});
        }
      }
    }
    for (auto& dist : state.widths) dist.spread *= budget.spread_shrink;
  }

  if (pool.empty()) {
    throw NoFeasibleCandidate(
        "no candidate satisfied the requirements; best accuracy " +
            std::to_string(best_infeasible_accuracy),
        best_infeasible_accuracy);
  }
  std::sort(pool.begin(), pool.end(),
            [](const Candidate& a, const Candidate& b) {
              return a.u_score > b.u_score;
            });
  return pool;
}

Evaluator make_training_evaluator(const Dataset& train_set,
                                  const Dataset& val_set, TrainConfig cfg) {
  return [&train_set, &val_set, cfg](const ArchitectureSpec& spec,
                                     uint64_t seed) {
    Network net = build_network(spec, seed);
    TrainConfig local = cfg;
    local.seed = derive_seed(cfg.seed, seed);
    const History history = train(&net, train_set, val_set, local);
    return history.empty() ? 0.0
                           : static_cast<double>(history.back().val_accuracy);
  };
}

}  // namespace esn
