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

#ifndef ESN_TRAIN_HPP_
#define ESN_TRAIN_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "esn/arch.hpp"
#include "esn/dataset.hpp"
#include "esn/network.hpp"

namespace esn {

struct TrainConfig {
  float learning_rate = 0.1f;
  // Epochs at which the rate is multiplied by lr_decay. Empty means the
  // default two milestones at 1/2 and 3/4 of the run.
  std::vector<int> lr_milestones;
  float lr_decay = 0.1f;
  float momentum = 0.9f;
  float weight_decay = 1e-5f;  // applied to conv/dense weights only
  int batch_size = 64;
  int epochs = 10;
  uint64_t seed = 0;
  // When > 0, evaluate the training set after each epoch and stop early
  // once accuracy reaches this value.
  float stop_at_train_accuracy = 0.0f;
};

struct EpochStats {
  int epoch = 0;
  float learning_rate = 0.0f;
  float train_loss = 0.0f;
  float train_accuracy = -1.0f;  // -1 when not evaluated
  float val_accuracy = -1.0f;    // -1 when no validation set given
};
using History = std::vector<EpochStats>;

// Plain SGD with momentum; weight decay goes into the gradient before the
// velocity update. Momentum 0 and decay 0 reduce to w' = w - lr * g.
class SgdOptimizer {
 public:
  explicit SgdOptimizer(Network* net);
  void step(const Gradients& grads, float lr, float momentum,
            float weight_decay);

 private:
  struct Slot {
    float* param;
    size_t count;
    bool decay;
    std::vector<float> velocity;
  };
  std::vector<Slot> slots_;
  Network* net_;
};

// Mini-batch SGD on cross-entropy, batch norm in train mode, seeded
// shuffling. Identical (seed, data, config) reproduces the loss history
// bit for bit. Throws NonFiniteLoss with the epoch index if training
// diverges, ShapeMismatch if features do not match the network input.
History train(Network* net, const Dataset& train_set, const Dataset& val_set,
              const TrainConfig& cfg);

// Fraction of argmax-correct predictions, batch norm in infer mode,
// argmax ties broken toward the lower class index. EmptyDataset if empty.
double evaluate(Network* net, const Dataset& dataset);

// evaluate(net, val_set) >= threshold
bool indicator(Network* net, const Dataset& val_set, double threshold = 0.95);

struct Prediction {
  std::string label;
  std::vector<float> probs;
};
Prediction predict(Network* net, const MfccMatrix& features,
                   const LabelMap& labels);

// Checkpoint = <prefix>.esnw weights plus a <prefix>.json sidecar with the
// spec, epoch, validation accuracy and the training config.
void save_checkpoint(const std::string& prefix, const Network& net,
                     const ArchitectureSpec& spec, int epoch,
                     double val_accuracy, const TrainConfig& cfg);

}  // namespace esn

#endif  // ESN_TRAIN_HPP_
