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

#ifndef ESN_NETWORK_HPP_
#define ESN_NETWORK_HPP_

#include <array>
#include <string>
#include <vector>

#include "esn/layers.hpp"
#include "esn/tensor.hpp"

namespace esn {

// One executable stage. ConvBn stages own a conv and (unless folded) its
// batch norm; skip_source >= 0 marks the stage that closes a residual
// block: the input of stage skip_source is added before the activation.
struct NetworkLayer {
  enum class Kind { kConvBn, kAvgPool, kGlobalAvgPool, kDense, kSoftmax };
  Kind kind = Kind::kConvBn;

  ConvLayer conv;
  BatchNormLayer bn;
  bool folded = false;

  int pool_h = 0, pool_w = 0;

  DenseLayer dense;

  int skip_source = -1;
};

// Activations captured by a train-mode forward pass.
struct ForwardCache {
  Tensor input;                    // network input, batched
  std::vector<Tensor> outputs;     // per-layer outputs
  std::vector<Tensor> conv_out;    // ConvBn: raw conv result (bn input)
  std::vector<Tensor> pre_relu;    // ConvBn: pre-activation (after skip add)
  std::vector<BatchStats> stats;   // ConvBn: train-mode batch statistics
};

// Parameter gradients, indexed like Network::layers.
struct LayerGrads {
  Tensor conv_weights;
  std::vector<float> bn_gamma, bn_beta;
  Tensor dense_weights;
};
using Gradients = std::vector<LayerGrads>;

struct Network {
  std::string name;
  std::array<int, 3> input_shape = {1, 98, 40};  // channels, frames, coeffs
  std::vector<NetworkLayer> layers;

  // Runs the net on [C,H,W] (returns [classes]) or [N,C,H,W] (returns
  // [N,classes]). Softmax applied; rows sum to 1. Train mode updates
  // batch-norm running statistics.
  Tensor forward(const Tensor& input, Mode mode);

  // Train-mode forward that captures everything backward() needs.
  // Returns the class probabilities.
  Tensor forward_cached(const Tensor& input, ForwardCache* cache);

  // grad_logits is the loss gradient at the dense output, [N, classes].
  // Returns the gradient with respect to the network input.
  Tensor backward(const ForwardCache& cache, const Tensor& grad_logits,
                  Gradients* grads);

  int num_classes() const;

  // Conv-first networks take [C,H,W] / [N,C,H,W]; dense-first toys take
  // [F] / [N,F].
  bool input_is_batched(const Tensor& input) const;
};

// Network with every batch norm folded into its convolution; inference
// outputs match the unfolded network.
Network fold_network(const Network& net);

int64_t count_params(const Network& net, ParamMode mode);

// Weight file: magic "ESNW", u32 version=1, u32 record count; per record
// u32 name length + UTF-8 name, u32 rank, u32 dims, f32 little-endian
// values. Records appear in layer order.
void save_network(const std::string& path, const Network& net);

// Loads records into a network whose structure matches the file. A file
// without batch-norm records (a folded checkpoint) folds *net first.
void load_network_weights(const std::string& path, Network* net);

}  // namespace esn

#endif  // ESN_NETWORK_HPP_
