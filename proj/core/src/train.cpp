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

#include "esn/train.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "esn/errors.hpp"
#include "esn/random.hpp"

namespace esn {

namespace {

// Stacks examples[indices[begin..end)] into one [B, 1, H, W] tensor.
Tensor make_batch(const Dataset& ds, const std::vector<int>& order,
                  size_t begin, size_t end, std::vector<int>* labels) {
  const MfccMatrix& first = ds.examples[order[begin]].features;
  const int h = first.frame_count;
  const int w = first.coeff_count;
  Tensor batch({static_cast<int>(end - begin), 1, h, w});
  labels->clear();
  for (size_t i = begin; i < end; ++i) {
    const Example& ex = ds.examples[order[i]];
    if (ex.features.frame_count != h || ex.features.coeff_count != w) {
      throw ShapeMismatch("dataset features have inconsistent shapes");
    }
    std::copy(ex.features.values.begin(), ex.features.values.end(),
              batch.data.begin() +
                  (i - begin) * static_cast<size_t>(h) * w);
    labels->push_back(ex.label);
  }
  return batch;
}

int argmax_row(const float* row, int n) {
  int best = 0;
  for (int i = 1; i < n; ++i) {
    if (row[i] > row[best]) best = i;  // ties keep the lower index
  }
  return best;
}

}  // namespace

SgdOptimizer::SgdOptimizer(Network* net) : net_(net) {
  for (auto& layer : net->layers) {
    switch (layer.kind) {
      case NetworkLayer::Kind::kConvBn:
        slots_.push_back({layer.conv.weights.data.data(),
                          layer.conv.weights.data.size(), true, {}});
        if (!layer.folded) {
          slots_.push_back({layer.bn.gamma.data(), layer.bn.gamma.size(),
                            false, {}});
          slots_.push_back({layer.bn.beta.data(), layer.bn.beta.size(),
                            false, {}});
        }
        break;
      case NetworkLayer::Kind::kDense:
        slots_.push_back({layer.dense.weights.data.data(),
                          layer.dense.weights.data.size(), true, {}});
        break;
      default:
        break;
    }
  }
  for (auto& slot : slots_) slot.velocity.assign(slot.count, 0.0f);
}

void SgdOptimizer::step(const Gradients& grads, float lr, float momentum,
                        float weight_decay) {
  // Rebuild the flat gradient view in the same order as the slots.
  std::vector<const float*> grad_ptrs;
  for (size_t li = 0; li < net_->layers.size(); ++li) {
    const auto& layer = net_->layers[li];
    const auto& g = grads[li];
    switch (layer.kind) {
      case NetworkLayer::Kind::kConvBn:
        grad_ptrs.push_back(g.conv_weights.data.data());
        if (!layer.folded) {
          grad_ptrs.push_back(g.bn_gamma.data());
          grad_ptrs.push_back(g.bn_beta.data());
        }
        break;
      case NetworkLayer::Kind::kDense:
        grad_ptrs.push_back(g.dense_weights.data.data());
        break;
      default:
        break;
    }
  }
  for (size_t s = 0; s < slots_.size(); ++s) {
    Slot& slot = slots_[s];
    const float* g = grad_ptrs[s];
    for (size_t i = 0; i < slot.count; ++i) {
      float grad = g[i];
      if (slot.decay) grad += weight_decay * slot.param[i];
      slot.velocity[i] = momentum * slot.velocity[i] + grad;
      slot.param[i] -= lr * slot.velocity[i];
    }
  }
}

History train(Network* net, const Dataset& train_set, const Dataset& val_set,
              const TrainConfig& cfg) {
  if (train_set.examples.empty()) {
    throw EmptyDataset("training set is empty");
  }
  const int classes = net->num_classes();

  std::vector<int> milestones = cfg.lr_milestones;
  if (milestones.empty() && cfg.epochs >= 2) {
    milestones = {cfg.epochs / 2, cfg.epochs * 3 / 4};
  }

  SgdOptimizer opt(net);
  History history;
  std::vector<int> order(train_set.examples.size());
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    float lr = cfg.learning_rate;
    for (int m : milestones) {
      if (epoch >= m) lr *= cfg.lr_decay;
    }

    Prng rng(derive_seed(cfg.seed, static_cast<uint64_t>(epoch)));
    rng.shuffle(&order);

    double loss_sum = 0.0;
    size_t seen = 0;
    for (size_t begin = 0; begin < order.size();
         begin += static_cast<size_t>(cfg.batch_size)) {
      const size_t end =
          std::min(order.size(), begin + static_cast<size_t>(cfg.batch_size));
      std::vector<int> labels;
      Tensor batch = make_batch(train_set, order, begin, end, &labels);
      const int bsize = static_cast<int>(end - begin);

      ForwardCache cache;
      Tensor probs = net->forward_cached(batch, &cache);

      Tensor grad_logits({bsize, classes});
      double batch_loss = 0.0;
      for (int i = 0; i < bsize; ++i) {
        std::vector<float> row(probs.data.begin() + i * classes,
                               probs.data.begin() + (i + 1) * classes);
        auto [loss, grad] = cross_entropy(row, labels[i]);
        batch_loss += loss;
        const float scale = 1.0f / static_cast<float>(bsize);
        for (int c = 0; c < classes; ++c) {
          grad_logits.data[static_cast<size_t>(i) * classes + c] =
              grad[c] * scale;
        }
      }
      batch_loss /= bsize;
      if (!std::isfinite(batch_loss)) {
        throw NonFiniteLoss(
            "training diverged at epoch " + std::to_string(epoch), epoch);
      }
      loss_sum += batch_loss * bsize;
      seen += static_cast<size_t>(bsize);

      Gradients grads;
      net->backward(cache, grad_logits, &grads);
      opt.step(grads, lr, cfg.momentum, cfg.weight_decay);
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.learning_rate = lr;
    stats.train_loss = static_cast<float>(loss_sum / seen);
    if (cfg.stop_at_train_accuracy > 0.0f) {
      stats.train_accuracy = static_cast<float>(evaluate(net, train_set));
    }
    if (!val_set.examples.empty()) {
      stats.val_accuracy = static_cast<float>(evaluate(net, val_set));
    }
    history.push_back(stats);

    if (cfg.stop_at_train_accuracy > 0.0f &&
        stats.train_accuracy >= cfg.stop_at_train_accuracy) {
      break;
    }
  }
  return history;
}

double evaluate(Network* net, const Dataset& dataset) {
  if (dataset.examples.empty()) {
    throw EmptyDataset("cannot evaluate an empty dataset");
  }
  const int classes = net->num_classes();
  constexpr size_t kEvalBatch = 64;
  std::vector<int> order(dataset.examples.size());
  std::iota(order.begin(), order.end(), 0);

  size_t correct = 0;
  for (size_t begin = 0; begin < order.size(); begin += kEvalBatch) {
    const size_t end = std::min(order.size(), begin + kEvalBatch);
    std::vector<int> labels;
    Tensor batch = make_batch(dataset, order, begin, end, &labels);
    Tensor probs = net->forward(batch, Mode::kInfer);
    for (size_t i = 0; i < end - begin; ++i) {
      const int pred = argmax_row(probs.data.data() + i * classes, classes);
      if (pred == labels[i]) ++correct;
    }
  }
  return static_cast<double>(correct) /
         static_cast<double>(dataset.examples.size());
}

bool indicator(Network* net, const Dataset& val_set, double threshold) {
  return evaluate(net, val_set) >= threshold;
}

Prediction predict(Network* net, const MfccMatrix& features,
                   const LabelMap& labels) {
  Tensor probs = net->forward(mfcc_to_tensor(features), Mode::kInfer);
  Prediction p;
  p.probs = probs.data;
  const int best =
      argmax_row(p.probs.data(), static_cast<int>(p.probs.size()));
  p.label = labels.names[static_cast<size_t>(best)];
  return p;
}

void save_checkpoint(const std::string& prefix, const Network& net,
                     const ArchitectureSpec& spec, int epoch,
                     double val_accuracy, const TrainConfig& cfg) {
  save_network(prefix + ".esnw", net);

  nlohmann::json sidecar;
  sidecar["spec"] = nlohmann::json::parse(serialize_spec(spec));
  sidecar["epoch"] = epoch;
  sidecar["val_accuracy"] = val_accuracy;
  sidecar["config"] = {
      {"learning_rate", cfg.learning_rate},
      {"lr_milestones", cfg.lr_milestones},
      {"lr_decay", cfg.lr_decay},
      {"momentum", cfg.momentum},
      {"weight_decay", cfg.weight_decay},
      {"batch_size", cfg.batch_size},
      {"epochs", cfg.epochs},
      {"seed", cfg.seed},
  };
  std::ofstream out(prefix + ".json");
  if (!out) throw IoError("cannot open " + prefix + ".json for writing");
  out << sidecar.dump(2) << "\n";
  if (!out) throw IoError("write failed: " + prefix + ".json");
}

}  // namespace esn
