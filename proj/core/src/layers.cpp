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

#include "esn/layers.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "esn/errors.hpp"
#include "esn/threading.hpp"

namespace esn {

namespace {

struct Shape4 {
  int n, c, h, w;
  bool batched;  // false when the caller passed [C,H,W]
};

Shape4 as_batched(const Tensor& t, const char* who) {
  if (t.rank() == 4) return {t.dim(0), t.dim(1), t.dim(2), t.dim(3), true};
  if (t.rank() == 3) return {1, t.dim(0), t.dim(1), t.dim(2), false};
  throw ShapeMismatch(std::string(who) + ": expected [C,H,W] or [N,C,H,W]");
}

std::vector<int> out_shape(const Shape4& s, int c, int h, int w) {
  if (s.batched) return {s.n, c, h, w};
  return {c, h, w};
}

// C[M,N] += A[M,K] * B[K,N], row-major
void gemm_acc(int M, int K, int N, const float* A, const float* B, float* C) {
  for (int m = 0; m < M; ++m) {
    const float* a_row = A + static_cast<size_t>(m) * K;
    float* c_row = C + static_cast<size_t>(m) * N;
    for (int k = 0; k < K; ++k) {
      const float a = a_row[k];
      if (a == 0.0f) continue;
      const float* b_row = B + static_cast<size_t>(k) * N;
      for (int n = 0; n < N; ++n) c_row[n] += a * b_row[n];
    }
  }
}

// C[M,K] += A[M,N] * B[K,N]^T
void gemm_nt_acc(int M, int K, int N, const float* A, const float* B,
                 float* C) {
  for (int m = 0; m < M; ++m) {
    const float* a_row = A + static_cast<size_t>(m) * N;
    float* c_row = C + static_cast<size_t>(m) * K;
    for (int k = 0; k < K; ++k) {
      const float* b_row = B + static_cast<size_t>(k) * N;
      float acc = 0.0f;
      for (int n = 0; n < N; ++n) acc += a_row[n] * b_row[n];
      c_row[k] += acc;
    }
  }
}

// C[K,N] += A[M,K]^T * B[M,N]
void gemm_tn_acc(int M, int K, int N, const float* A, const float* B,
                 float* C) {
  for (int m = 0; m < M; ++m) {
    const float* a_row = A + static_cast<size_t>(m) * K;
    const float* b_row = B + static_cast<size_t>(m) * N;
    for (int k = 0; k < K; ++k) {
      const float a = a_row[k];
      if (a == 0.0f) continue;
      float* c_row = C + static_cast<size_t>(k) * N;
      for (int n = 0; n < N; ++n) c_row[n] += a * b_row[n];
    }
  }
}

// Unrolls 3x3-style patches into a [C*kh*kw, H*W] matrix with zero padding,
// row order matching the conv weight layout.
void im2col(const float* img, int C, int H, int W, int kh, int kw, int pad_t,
            int pad_l, float* cols) {
  const size_t HW = static_cast<size_t>(H) * W;
  size_t row = 0;
  for (int c = 0; c < C; ++c) {
    const float* plane = img + static_cast<size_t>(c) * HW;
    for (int ki = 0; ki < kh; ++ki) {
      for (int kj = 0; kj < kw; ++kj, ++row) {
        float* dst = cols + row * HW;
        const int shift = kj - pad_l;
        const int ow_lo = std::max(0, -shift);
        const int ow_hi = std::min(W, W - shift);
        for (int oh = 0; oh < H; ++oh) {
          const int ih = oh + ki - pad_t;
          float* drow = dst + static_cast<size_t>(oh) * W;
          if (ih < 0 || ih >= H || ow_hi <= ow_lo) {
            std::fill(drow, drow + W, 0.0f);
            continue;
          }
          const float* srow = plane + static_cast<size_t>(ih) * W;
          std::fill(drow, drow + ow_lo, 0.0f);
          std::memcpy(drow + ow_lo, srow + ow_lo + shift,
                      static_cast<size_t>(ow_hi - ow_lo) * sizeof(float));
          std::fill(drow + ow_hi, drow + W, 0.0f);
        }
      }
    }
  }
}

// Scatter-add transpose of im2col.
void col2im_acc(const float* cols, int C, int H, int W, int kh, int kw,
                int pad_t, int pad_l, float* img) {
  const size_t HW = static_cast<size_t>(H) * W;
  size_t row = 0;
  for (int c = 0; c < C; ++c) {
    float* plane = img + static_cast<size_t>(c) * HW;
    for (int ki = 0; ki < kh; ++ki) {
      for (int kj = 0; kj < kw; ++kj, ++row) {
        const float* src = cols + row * HW;
        const int shift = kj - pad_l;
        const int ow_lo = std::max(0, -shift);
        const int ow_hi = std::min(W, W - shift);
        if (ow_hi <= ow_lo) continue;
        for (int oh = 0; oh < H; ++oh) {
          const int ih = oh + ki - pad_t;
          if (ih < 0 || ih >= H) continue;
          const float* srow = src + static_cast<size_t>(oh) * W;
          float* drow = plane + static_cast<size_t>(ih) * W;
          for (int ow = ow_lo; ow < ow_hi; ++ow) drow[ow + shift] += srow[ow];
        }
      }
    }
  }
}

void check_conv_input(const Shape4& s, const ConvLayer& layer,
                      const char* who) {
  if (s.c != layer.in_channels) {
    throw ChannelMismatch(std::string(who) + ": input has " +
                          std::to_string(s.c) + " channels, layer expects " +
                          std::to_string(layer.in_channels));
  }
}

void check_bn_channels(int c, const BatchNormLayer& layer, const char* who) {
  if (c != layer.channels()) {
    throw ChannelMismatch(std::string(who) + ": input has " +
                          std::to_string(c) + " channels, layer has " +
                          std::to_string(layer.channels()));
  }
}

}  // namespace

ConvLayer make_conv(int kernel_h, int kernel_w, int in_channels,
                    int out_channels) {
  ConvLayer layer;
  layer.kernel_h = kernel_h;
  layer.kernel_w = kernel_w;
  layer.in_channels = in_channels;
  layer.out_channels = out_channels;
  layer.weights = Tensor({out_channels, in_channels, kernel_h, kernel_w});
  return layer;
}

BatchNormLayer make_batchnorm(int channels) {
  BatchNormLayer layer;
  layer.gamma.assign(channels, 1.0f);
  layer.beta.assign(channels, 0.0f);
  layer.running_mean.assign(channels, 0.0f);
  layer.running_var.assign(channels, 1.0f);
  return layer;
}

DenseLayer make_dense(int in_features, int out_features) {
  DenseLayer layer;
  layer.in_features = in_features;
  layer.out_features = out_features;
  layer.weights = Tensor({out_features, in_features});
  return layer;
}

Tensor conv2d_forward(const Tensor& input, const ConvLayer& layer) {
  const Shape4 s = as_batched(input, "conv2d");
  check_conv_input(s, layer, "conv2d");
  const int H = s.h, W = s.w;
  const int K = layer.in_channels * layer.kernel_h * layer.kernel_w;
  const size_t HW = static_cast<size_t>(H) * W;
  const int pad_t = (layer.kernel_h - 1) / 2;
  const int pad_l = (layer.kernel_w - 1) / 2;

  Tensor out(out_shape(s, layer.out_channels, H, W));
  const size_t in_stride = static_cast<size_t>(s.c) * HW;
  const size_t out_stride = static_cast<size_t>(layer.out_channels) * HW;

  parallel_for(s.n, [&](int64_t img) {
    std::vector<float> cols(static_cast<size_t>(K) * HW);
    im2col(input.data.data() + img * in_stride, s.c, H, W, layer.kernel_h,
           layer.kernel_w, pad_t, pad_l, cols.data());
    float* dst = out.data.data() + img * out_stride;
    if (!layer.bias.empty()) {
      for (int c = 0; c < layer.out_channels; ++c) {
        std::fill(dst + c * HW, dst + (c + 1) * HW, layer.bias[c]);
      }
    }
    gemm_acc(layer.out_channels, K, static_cast<int>(HW),
             layer.weights.data.data(), cols.data(), dst);
  });
  return out;
}

void conv2d_backward(const Tensor& input, const ConvLayer& layer,
                     const Tensor& grad_out, Tensor* grad_input,
                     Tensor* grad_weights, std::vector<float>* grad_bias) {
  const Shape4 s = as_batched(input, "conv2d_backward");
  check_conv_input(s, layer, "conv2d_backward");
  const Shape4 g = as_batched(grad_out, "conv2d_backward");
  if (g.n != s.n || g.c != layer.out_channels || g.h != s.h || g.w != s.w) {
    throw ShapeMismatch("conv2d_backward: grad_out shape mismatch");
  }
  const int H = s.h, W = s.w;
  const int K = layer.in_channels * layer.kernel_h * layer.kernel_w;
  const size_t HW = static_cast<size_t>(H) * W;
  const int pad_t = (layer.kernel_h - 1) / 2;
  const int pad_l = (layer.kernel_w - 1) / 2;
  const size_t in_stride = static_cast<size_t>(s.c) * HW;
  const size_t out_stride = static_cast<size_t>(layer.out_channels) * HW;

  if (grad_input) *grad_input = Tensor(input.shape);
  // Per-image weight gradients, reduced in index order afterwards so the
  // result does not depend on the worker count.
  std::vector<std::vector<float>> w_grads;
  if (grad_weights) {
    w_grads.assign(s.n,
                   std::vector<float>(layer.weights.data.size(), 0.0f));
  }

  parallel_for(s.n, [&](int64_t img) {
    const float* g_img = grad_out.data.data() + img * out_stride;
    std::vector<float> cols(static_cast<size_t>(K) * HW);
    if (grad_weights) {
      im2col(input.data.data() + img * in_stride, s.c, H, W, layer.kernel_h,
             layer.kernel_w, pad_t, pad_l, cols.data());
      gemm_nt_acc(layer.out_channels, K, static_cast<int>(HW), g_img,
                  cols.data(), w_grads[img].data());
    }
    if (grad_input) {
      std::vector<float> grad_cols(static_cast<size_t>(K) * HW, 0.0f);
      gemm_tn_acc(layer.out_channels, K, static_cast<int>(HW),
                  layer.weights.data.data(), g_img, grad_cols.data());
      col2im_acc(grad_cols.data(), s.c, H, W, layer.kernel_h, layer.kernel_w,
                 pad_t, pad_l, grad_input->data.data() + img * in_stride);
    }
  });

  if (grad_weights) {
    *grad_weights = Tensor(layer.weights.shape);
    for (int64_t img = 0; img < s.n; ++img) {
      for (size_t i = 0; i < grad_weights->data.size(); ++i) {
        grad_weights->data[i] += w_grads[img][i];
      }
    }
  }
  if (grad_bias) {
    grad_bias->assign(layer.out_channels, 0.0f);
    for (int64_t img = 0; img < s.n; ++img) {
      const float* g_img = grad_out.data.data() + img * out_stride;
      for (int c = 0; c < layer.out_channels; ++c) {
        float acc = 0.0f;
        for (size_t i = 0; i < HW; ++i) acc += g_img[c * HW + i];
        (*grad_bias)[c] += acc;
      }
    }
  }
}

Tensor batchnorm_forward(const Tensor& input, BatchNormLayer* layer, Mode mode,
                         BatchStats* saved) {
  const Shape4 s = as_batched(input, "batchnorm");
  check_bn_channels(s.c, *layer, "batchnorm");
  const size_t HW = static_cast<size_t>(s.h) * s.w;
  const size_t cstride = HW;
  const size_t nstride = static_cast<size_t>(s.c) * HW;
  const double m = static_cast<double>(s.n) * HW;

  std::vector<float> mean(s.c), var(s.c);
  if (mode == Mode::kTrain) {
    for (int c = 0; c < s.c; ++c) {
      double sum = 0.0, sq = 0.0;
      for (int img = 0; img < s.n; ++img) {
        const float* p = input.data.data() + img * nstride + c * cstride;
        for (size_t i = 0; i < HW; ++i) {
          sum += p[i];
          sq += static_cast<double>(p[i]) * p[i];
        }
      }
      const double mu = sum / m;
      mean[c] = static_cast<float>(mu);
      var[c] = static_cast<float>(std::max(0.0, sq / m - mu * mu));
    }
    for (int c = 0; c < s.c; ++c) {
      layer->running_mean[c] =
          (1.0f - layer->momentum) * layer->running_mean[c] +
          layer->momentum * mean[c];
      layer->running_var[c] =
          (1.0f - layer->momentum) * layer->running_var[c] +
          layer->momentum * var[c];
    }
    if (saved) {
      saved->mean = mean;
      saved->var = var;
    }
  } else {
    mean = layer->running_mean;
    var = layer->running_var;
  }

  Tensor out(input.shape);
  for (int img = 0; img < s.n; ++img) {
    for (int c = 0; c < s.c; ++c) {
      const float inv_std = 1.0f / std::sqrt(var[c] + layer->eps);
      const float scale = layer->gamma[c] * inv_std;
      const float shift = layer->beta[c] - mean[c] * scale;
      const float* src = input.data.data() + img * nstride + c * cstride;
      float* dst = out.data.data() + img * nstride + c * cstride;
      for (size_t i = 0; i < HW; ++i) dst[i] = src[i] * scale + shift;
    }
  }
  return out;
}

void batchnorm_backward(const Tensor& input, const BatchNormLayer& layer,
                        const Tensor& grad_out, const BatchStats& stats,
                        Tensor* grad_input, std::vector<float>* grad_gamma,
                        std::vector<float>* grad_beta) {
  const Shape4 s = as_batched(input, "batchnorm_backward");
  check_bn_channels(s.c, layer, "batchnorm_backward");
  if (!input.same_shape(grad_out)) {
    throw ShapeMismatch("batchnorm_backward: grad_out shape mismatch");
  }
  const size_t HW = static_cast<size_t>(s.h) * s.w;
  const size_t nstride = static_cast<size_t>(s.c) * HW;
  const double m = static_cast<double>(s.n) * HW;

  if (grad_input) *grad_input = Tensor(input.shape);
  if (grad_gamma) grad_gamma->assign(s.c, 0.0f);
  if (grad_beta) grad_beta->assign(s.c, 0.0f);

  for (int c = 0; c < s.c; ++c) {
    const double mu = stats.mean[c];
    const double inv_std = 1.0 / std::sqrt(stats.var[c] + layer.eps);
    // reductions: sum(g), sum(g * xhat)
    double sum_g = 0.0, sum_gx = 0.0;
    for (int img = 0; img < s.n; ++img) {
      const float* x = input.data.data() + img * nstride + c * HW;
      const float* g = grad_out.data.data() + img * nstride + c * HW;
      for (size_t i = 0; i < HW; ++i) {
        const double xhat = (x[i] - mu) * inv_std;
        sum_g += g[i];
        sum_gx += g[i] * xhat;
      }
    }
    if (grad_gamma) (*grad_gamma)[c] = static_cast<float>(sum_gx);
    if (grad_beta) (*grad_beta)[c] = static_cast<float>(sum_g);
    if (grad_input) {
      const double gamma = layer.gamma[c];
      const double mean_g = sum_g / m;
      const double mean_gx = sum_gx / m;
      for (int img = 0; img < s.n; ++img) {
        const float* x = input.data.data() + img * nstride + c * HW;
        const float* g = grad_out.data.data() + img * nstride + c * HW;
        float* gi = grad_input->data.data() + img * nstride + c * HW;
        for (size_t i = 0; i < HW; ++i) {
          const double xhat = (x[i] - mu) * inv_std;
          gi[i] = static_cast<float>(gamma * inv_std *
                                     (g[i] - mean_g - xhat * mean_gx));
        }
      }
    }
  }
}

ConvLayer fold_batchnorm(const ConvLayer& conv, const BatchNormLayer& bn) {
  if (bn.channels() != conv.out_channels) {
    throw ChannelMismatch("fold_batchnorm: batch norm has " +
                          std::to_string(bn.channels()) +
                          " channels, conv produces " +
                          std::to_string(conv.out_channels));
  }
  ConvLayer folded = conv;
  folded.bias.assign(conv.out_channels, 0.0f);
  const size_t per_out = conv.weights.data.size() /
                         static_cast<size_t>(conv.out_channels);
  for (int c = 0; c < conv.out_channels; ++c) {
    const float scale = bn.gamma[c] / std::sqrt(bn.running_var[c] + bn.eps);
    float* w = folded.weights.data.data() + c * per_out;
    for (size_t i = 0; i < per_out; ++i) w[i] *= scale;
    const float base = conv.bias.empty() ? 0.0f : conv.bias[c];
    folded.bias[c] = bn.beta[c] + (base - bn.running_mean[c]) * scale;
  }
  return folded;
}

Tensor relu_forward(const Tensor& input) {
  Tensor out = input;
  for (float& v : out.data) v = std::max(v, 0.0f);
  return out;
}

Tensor relu_backward(const Tensor& input, const Tensor& grad_out) {
  if (!input.same_shape(grad_out)) {
    throw ShapeMismatch("relu_backward: shape mismatch");
  }
  Tensor out = grad_out;
  for (size_t i = 0; i < out.data.size(); ++i) {
    if (input.data[i] <= 0.0f) out.data[i] = 0.0f;
  }
  return out;
}

Tensor residual_block_forward(const Tensor& input, ResidualBlock* block,
                              Mode mode) {
  const Shape4 s = as_batched(input, "residual_block");
  if (block->conv_a.in_channels != s.c ||
      block->conv_b.out_channels != s.c) {
    throw ChannelMismatch(
        "residual_block: identity skip needs conv_a.in == conv_b.out == " +
        std::to_string(s.c));
  }
  Tensor h = conv2d_forward(input, block->conv_a);
  h = batchnorm_forward(h, &block->bn_a, mode);
  h = relu_forward(h);
  h = conv2d_forward(h, block->conv_b);
  h = batchnorm_forward(h, &block->bn_b, mode);
  add_inplace(&h, input);
  return relu_forward(h);
}

Tensor avg_pool2d(const Tensor& input, int pool_h, int pool_w) {
  const Shape4 s = as_batched(input, "avg_pool2d");
  if (pool_h <= 0 || pool_w <= 0 || pool_h > s.h || pool_w > s.w) {
    throw ShapeMismatch("avg_pool2d: window " + std::to_string(pool_h) + "x" +
                        std::to_string(pool_w) + " does not fit input " +
                        std::to_string(s.h) + "x" + std::to_string(s.w));
  }
  const int oh = (s.h + pool_h - 1) / pool_h;
  const int ow = (s.w + pool_w - 1) / pool_w;
  Tensor out(out_shape(s, s.c, oh, ow));
  const size_t in_plane = static_cast<size_t>(s.h) * s.w;
  const size_t out_plane = static_cast<size_t>(oh) * ow;
  for (int img = 0; img < s.n; ++img) {
    for (int c = 0; c < s.c; ++c) {
      const float* src =
          input.data.data() + (static_cast<size_t>(img) * s.c + c) * in_plane;
      float* dst =
          out.data.data() + (static_cast<size_t>(img) * s.c + c) * out_plane;
      for (int i = 0; i < oh; ++i) {
        const int h0 = i * pool_h;
        const int h1 = std::min(s.h, h0 + pool_h);
        for (int j = 0; j < ow; ++j) {
          const int w0 = j * pool_w;
          const int w1 = std::min(s.w, w0 + pool_w);
          float acc = 0.0f;
          for (int y = h0; y < h1; ++y) {
            for (int x = w0; x < w1; ++x) acc += src[y * s.w + x];
          }
          dst[i * ow + j] = acc / static_cast<float>((h1 - h0) * (w1 - w0));
        }
      }
    }
  }
  return out;
}

Tensor avg_pool2d_backward(const Tensor& input, const Tensor& grad_out,
                           int pool_h, int pool_w) {
  const Shape4 s = as_batched(input, "avg_pool2d_backward");
  const int oh = (s.h + pool_h - 1) / pool_h;
  const int ow = (s.w + pool_w - 1) / pool_w;
  const Shape4 g = as_batched(grad_out, "avg_pool2d_backward");
  if (g.n != s.n || g.c != s.c || g.h != oh || g.w != ow) {
    throw ShapeMismatch("avg_pool2d_backward: grad_out shape mismatch");
  }
  Tensor grad_in(input.shape);
  const size_t in_plane = static_cast<size_t>(s.h) * s.w;
  const size_t out_plane = static_cast<size_t>(oh) * ow;
  for (int img = 0; img < s.n; ++img) {
    for (int c = 0; c < s.c; ++c) {
      float* dst = grad_in.data.data() +
                   (static_cast<size_t>(img) * s.c + c) * in_plane;
      const float* src = grad_out.data.data() +
                         (static_cast<size_t>(img) * s.c + c) * out_plane;
      for (int i = 0; i < oh; ++i) {
        const int h0 = i * pool_h;
        const int h1 = std::min(s.h, h0 + pool_h);
        for (int j = 0; j < ow; ++j) {
          const int w0 = j * pool_w;
          const int w1 = std::min(s.w, w0 + pool_w);
          const float share =
              src[i * ow + j] / static_cast<float>((h1 - h0) * (w1 - w0));
          for (int y = h0; y < h1; ++y) {
            for (int x = w0; x < w1; ++x) dst[y * s.w + x] += share;
          }
        }
      }
    }
  }
  return grad_in;
}

Tensor global_avg_pool(const Tensor& input) {
  const Shape4 s = as_batched(input, "global_avg_pool");
  Tensor out(s.batched ? std::vector<int>{s.n, s.c} : std::vector<int>{s.c});
  const size_t plane = static_cast<size_t>(s.h) * s.w;
  for (int img = 0; img < s.n; ++img) {
    for (int c = 0; c < s.c; ++c) {
      const float* src =
          input.data.data() + (static_cast<size_t>(img) * s.c + c) * plane;
      double acc = 0.0;
      for (size_t i = 0; i < plane; ++i) acc += src[i];
      out.data[static_cast<size_t>(img) * s.c + c] =
          static_cast<float>(acc / static_cast<double>(plane));
    }
  }
  return out;
}

Tensor global_avg_pool_backward(const Tensor& input, const Tensor& grad_out) {
  const Shape4 s = as_batched(input, "global_avg_pool_backward");
  if (grad_out.numel() != static_cast<int64_t>(s.n) * s.c) {
    throw ShapeMismatch("global_avg_pool_backward: grad_out shape mismatch");
  }
  Tensor grad_in(input.shape);
  const size_t plane = static_cast<size_t>(s.h) * s.w;
  const float inv = 1.0f / static_cast<float>(plane);
  for (int img = 0; img < s.n; ++img) {
    for (int c = 0; c < s.c; ++c) {
      const float g = grad_out.data[static_cast<size_t>(img) * s.c + c] * inv;
      float* dst = grad_in.data.data() +
                   (static_cast<size_t>(img) * s.c + c) * plane;
      for (size_t i = 0; i < plane; ++i) dst[i] = g;
    }
  }
  return grad_in;
}

namespace {

struct Shape2 {
  int n, f;
  bool batched;
};

Shape2 as_rows(const Tensor& t, const char* who) {
  if (t.rank() == 2) return {t.dim(0), t.dim(1), true};
  if (t.rank() == 1) return {1, t.dim(0), false};
  throw ShapeMismatch(std::string(who) + ": expected [F] or [N,F]");
}

}  // namespace

Tensor dense_forward(const Tensor& input, const DenseLayer& layer) {
  const Shape2 s = as_rows(input, "dense");
  if (s.f != layer.in_features) {
    throw ShapeMismatch("dense: input has " + std::to_string(s.f) +
                        " features, layer expects " +
                        std::to_string(layer.in_features));
  }
  Tensor out(s.batched ? std::vector<int>{s.n, layer.out_features}
                       : std::vector<int>{layer.out_features});
  for (int img = 0; img < s.n; ++img) {
    const float* x = input.data.data() + static_cast<size_t>(img) * s.f;
    float* y =
        out.data.data() + static_cast<size_t>(img) * layer.out_features;
    for (int o = 0; o < layer.out_features; ++o) {
      const float* w =
          layer.weights.data.data() + static_cast<size_t>(o) * s.f;
      float acc = 0.0f;
      for (int i = 0; i < s.f; ++i) acc += w[i] * x[i];
      y[o] = acc;
    }
  }
  return out;
}

void dense_backward(const Tensor& input, const DenseLayer& layer,
                    const Tensor& grad_out, Tensor* grad_input,
                    Tensor* grad_weights) {
  const Shape2 s = as_rows(input, "dense_backward");
  const Shape2 g = as_rows(grad_out, "dense_backward");
  if (g.n != s.n || g.f != layer.out_features) {
    throw ShapeMismatch("dense_backward: grad_out shape mismatch");
  }
  if (grad_input) *grad_input = Tensor(input.shape);
  if (grad_weights) *grad_weights = Tensor(layer.weights.shape);
  for (int img = 0; img < s.n; ++img) {
    const float* x = input.data.data() + static_cast<size_t>(img) * s.f;
    const float* go =
        grad_out.data.data() + static_cast<size_t>(img) * layer.out_features;
    for (int o = 0; o < layer.out_features; ++o) {
      const float* w =
          layer.weights.data.data() + static_cast<size_t>(o) * s.f;
      if (grad_weights) {
        float* gw =
            grad_weights->data.data() + static_cast<size_t>(o) * s.f;
        for (int i = 0; i < s.f; ++i) gw[i] += go[o] * x[i];
      }
      if (grad_input) {
        float* gi = grad_input->data.data() + static_cast<size_t>(img) * s.f;
        for (int i = 0; i < s.f; ++i) gi[i] += go[o] * w[i];
      }
    }
  }
}

Tensor softmax(const Tensor& logits) {
  const Shape2 s = as_rows(logits, "softmax");
  Tensor out = logits;
  for (int img = 0; img < s.n; ++img) {
    float* row = out.data.data() + static_cast<size_t>(img) * s.f;
    float mx = row[0];
    for (int i = 1; i < s.f; ++i) mx = std::max(mx, row[i]);
    double denom = 0.0;
    for (int i = 0; i < s.f; ++i) {
      row[i] = std::exp(row[i] - mx);
      denom += row[i];
    }
    const float inv = static_cast<float>(1.0 / denom);
    for (int i = 0; i < s.f; ++i) row[i] *= inv;
  }
  return out;
}

std::pair<float, std::vector<float>> cross_entropy(
    const std::vector<float>& probs, int label) {
  if (label < 0 || label >= static_cast<int>(probs.size())) {
    throw ShapeMismatch("cross_entropy: label out of range");
  }
  const float loss =
      -std::log(std::max(probs[static_cast<size_t>(label)], 1e-12f));
  std::vector<float> grad = probs;
  grad[static_cast<size_t>(label)] -= 1.0f;
  return {loss, grad};
}

int64_t conv_param_count(const ConvLayer& layer, ParamMode mode) {
  int64_t n = static_cast<int64_t>(layer.kernel_h) * layer.kernel_w *
              layer.in_channels * layer.out_channels;
  if (mode == ParamMode::kFull) n += static_cast<int64_t>(layer.bias.size());
  return n;
}

int64_t dense_param_count(const DenseLayer& layer, ParamMode) {
  return static_cast<int64_t>(layer.in_features) * layer.out_features;
}

int64_t batchnorm_param_count(const BatchNormLayer& layer) {
  return 2 * static_cast<int64_t>(layer.channels());  // gamma, beta
}

}  // namespace esn
