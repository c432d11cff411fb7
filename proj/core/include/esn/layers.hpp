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

#ifndef ESN_LAYERS_HPP_
#define ESN_LAYERS_HPP_

#include <cstdint>
#include <utility>
#include <vector>

#include "esn/tensor.hpp"

namespace esn {

enum class Mode { kTrain, kInfer };
enum class ParamMode { kPaper, kFull };

// Convolution weights laid out [out_channels, in_channels, kh, kw].
// Bias is empty for trainable layers; batch-norm folding fills it in.
struct ConvLayer {
  int kernel_h = 0;
  int kernel_w = 0;
  int in_channels = 0;
  int out_channels = 0;
  Tensor weights;
  std::vector<float> bias;
};
ConvLayer make_conv(int kernel_h, int kernel_w, int in_channels,
                    int out_channels);

struct BatchNormLayer {
  std::vector<float> gamma, beta, running_mean, running_var;
  float eps = 1e-5f;
  float momentum = 0.1f;
  int channels() const { return static_cast<int>(gamma.size()); }
};
BatchNormLayer make_batchnorm(int channels);

// No bias; the published layer parameter counts imply plain weights.
struct DenseLayer {
  int in_features = 0;
  int out_features = 0;
  Tensor weights;  // [out, in]
};
DenseLayer make_dense(int in_features, int out_features);

// Per-channel batch statistics captured by a train-mode forward pass,
// needed again by the backward pass.
struct BatchStats {
  std::vector<float> mean, var;
};

// --- convolution -----------------------------------------------------------
// Cross-correlation, stride 1, zero same-padding. Input is [C,H,W] or
// [N,C,H,W]; output spatial size equals the input's.
Tensor conv2d_forward(const Tensor& input, const ConvLayer& layer);

// Exact analytic gradients of conv2d_forward. Any output pointer may be null.
void conv2d_backward(const Tensor& input, const ConvLayer& layer,
                     const Tensor& grad_out, Tensor* grad_input,
                     Tensor* grad_weights,
                     std::vector<float>* grad_bias = nullptr);

// --- batch normalization ----------------------------------------------------
// Train mode normalizes with statistics over (batch, H, W), updates running
// stats with the momentum rule, and writes the batch stats to *saved when
// given. Infer mode uses the running stats.
Tensor batchnorm_forward(const Tensor& input, BatchNormLayer* layer, Mode mode,
                         BatchStats* saved = nullptr);

void batchnorm_backward(const Tensor& input, const BatchNormLayer& layer,
                        const Tensor& grad_out, const BatchStats& stats,
                        Tensor* grad_input, std::vector<float>* grad_gamma,
                        std::vector<float>* grad_beta);

// Absorbs inference-mode batch norm into the convolution:
//   scale_c = gamma_c / sqrt(running_var_c + eps)
//   weights'_c = weights_c * scale_c
//   bias'_c   = beta_c - running_mean_c * scale_c
ConvLayer fold_batchnorm(const ConvLayer& conv, const BatchNormLayer& bn);

// --- activations ------------------------------------------------------------
Tensor relu_forward(const Tensor& input);
// Gradient passes where input > 0 (defined as 0 at exactly 0).
Tensor relu_backward(const Tensor& input, const Tensor& grad_out);

// --- residual block ---------------------------------------------------------
// out = relu( bn_b(conv_b( relu(bn_a(conv_a(x))) )) + x )
// Identity skip: conv_a.in_channels == conv_b.out_channels == x channels.
struct ResidualBlock {
  ConvLayer conv_a;
  BatchNormLayer bn_a;
  ConvLayer conv_b;
  BatchNormLayer bn_b;
};
Tensor residual_block_forward(const Tensor& input, ResidualBlock* block,
                              Mode mode);

// --- pooling ----------------------------------------------------------------
// Non-overlapping windows; a trailing partial window averages over the
// elements it actually covers.
Tensor avg_pool2d(const Tensor& input, int pool_h, int pool_w);
Tensor avg_pool2d_backward(const Tensor& input, const Tensor& grad_out,
                           int pool_h, int pool_w);

Tensor global_avg_pool(const Tensor& input);  // [N,C,H,W] -> [N,C]
Tensor global_avg_pool_backward(const Tensor& input, const Tensor& grad_out);

// --- dense / softmax / loss -------------------------------------------------
Tensor dense_forward(const Tensor& input, const DenseLayer& layer);
void dense_backward(const Tensor& input, const DenseLayer& layer,
                    const Tensor& grad_out, Tensor* grad_input,
                    Tensor* grad_weights);

// Row softmax with max subtraction; rows sum to 1 and stay positive.
Tensor softmax(const Tensor& logits);

// Loss and gradient w.r.t. the logits for one example:
//   loss = -ln(probs[label]), grad = probs - onehot(label).
std::pair<float, std::vector<float>> cross_entropy(
    const std::vector<float>& probs, int label);

// --- parameter accounting ---------------------------------------------------
// kPaper counts conv/dense weights only; kFull adds biases and batch-norm
// gamma/beta.
int64_t conv_param_count(const ConvLayer& layer, ParamMode mode);
int64_t dense_param_count(const DenseLayer& layer, ParamMode mode);
int64_t batchnorm_param_count(const BatchNormLayer& layer);

}  // namespace esn

#endif  // ESN_LAYERS_HPP_
