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

#include "esn/network.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <string>

#include "esn/errors.hpp"

namespace esn {

namespace {

void write_u32(std::ostream& out, uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                        static_cast<unsigned char>((v >> 8) & 0xff),
                        static_cast<unsigned char>((v >> 16) & 0xff),
                        static_cast<unsigned char>((v >> 24) & 0xff)};
  out.write(reinterpret_cast<char*>(b), 4);
}

uint32_t read_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (!in) throw ParseError("unexpected end of weight file");
  return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
         (static_cast<uint32_t>(b[2]) << 16) |
         (static_cast<uint32_t>(b[3]) << 24);
}

struct Record {
  std::string name;
  std::vector<uint32_t> dims;
  std::vector<float> values;
};

void write_record(std::ostream& out, const std::string& name,
                  const std::vector<uint32_t>& dims,
                  const float* values, size_t count) {
  write_u32(out, static_cast<uint32_t>(name.size()));
  out.write(name.data(), static_cast<std::streamsize>(name.size()));
  write_u32(out, static_cast<uint32_t>(dims.size()));
  for (uint32_t d : dims) write_u32(out, d);
  for (size_t i = 0; i < count; ++i) {
    uint32_t bits;
    std::memcpy(&bits, &values[i], 4);
    write_u32(out, bits);
  }
}

Record read_record(std::istream& in) {
  Record r;
  const uint32_t name_len = read_u32(in);
  r.name.resize(name_len);
  in.read(r.name.data(), name_len);
  if (!in) throw ParseError("unexpected end of weight file");
  const uint32_t rank = read_u32(in);
  r.dims.resize(rank);
  size_t count = 1;
  for (uint32_t i = 0; i < rank; ++i) {
    r.dims[i] = read_u32(in);
    count *= r.dims[i];
  }
  r.values.resize(count);
  for (size_t i = 0; i < count; ++i) {
    uint32_t bits = read_u32(in);
    std::memcpy(&r.values[i], &bits, 4);
  }
  return r;
}

}  // namespace

int Network::num_classes() const {
  for (auto it = layers.rbegin(); it != layers.rend(); ++it) {
    if (it->kind == NetworkLayer::Kind::kDense) return it->dense.out_features;
  }
  return 0;
}

bool Network::input_is_batched(const Tensor& input) const {
  const bool dense_first =
      !layers.empty() && layers.front().kind == NetworkLayer::Kind::kDense;
  return input.rank() == (dense_first ? 2 : 4);
}

Tensor Network::forward(const Tensor& input, Mode mode) {
  const bool batched = input_is_batched(input);
  // Only the inputs of block-opening layers need to stay alive for the
  // skip additions; everything else is streamed through.
  std::map<int, Tensor> saved;

  Tensor h = batched ? input : unsqueeze_batch(input);
  for (size_t li = 0; li < layers.size(); ++li) {
    for (const auto& other : layers) {
      if (other.skip_source == static_cast<int>(li)) {
        saved[static_cast<int>(li)] = h;
        break;
      }
    }
    NetworkLayer& layer = layers[li];
    switch (layer.kind) {
      case NetworkLayer::Kind::kConvBn: {
        Tensor z = conv2d_forward(h, layer.conv);
        if (!layer.folded) z = batchnorm_forward(z, &layer.bn, mode);
        if (layer.skip_source >= 0) {
          auto it = saved.find(layer.skip_source);
          add_inplace(&z, it->second);
          saved.erase(it);
        }
        h = relu_forward(z);
        break;
      }
      case NetworkLayer::Kind::kAvgPool:
        h = avg_pool2d(h, layer.pool_h, layer.pool_w);
        break;
      case NetworkLayer::Kind::kGlobalAvgPool:
        h = global_avg_pool(h);
        break;
      case NetworkLayer::Kind::kDense:
        h = dense_forward(h, layer.dense);
        break;
      case NetworkLayer::Kind::kSoftmax:
        h = softmax(h);
        break;
    }
  }
  return batched ? h : squeeze_batch(h);
}

Tensor Network::forward_cached(const Tensor& input, ForwardCache* cache) {
  cache->input = input_is_batched(input) ? input : unsqueeze_batch(input);
  cache->outputs.assign(layers.size(), Tensor());
  cache->conv_out.assign(layers.size(), Tensor());
  cache->pre_relu.assign(layers.size(), Tensor());
  cache->stats.assign(layers.size(), BatchStats());

  Tensor h = cache->input;
  for (size_t li = 0; li < layers.size(); ++li) {
    NetworkLayer& layer = layers[li];
    switch (layer.kind) {
      case NetworkLayer::Kind::kConvBn: {
        Tensor z = conv2d_forward(h, layer.conv);
        cache->conv_out[li] = z;
        z = batchnorm_forward(z, &layer.bn, Mode::kTrain, &cache->stats[li]);
        if (layer.skip_source >= 0) {
          add_inplace(&z, layer.skip_source == 0
                              ? cache->input
                              : cache->outputs[layer.skip_source - 1]);
        }
        cache->pre_relu[li] = z;
        h = relu_forward(z);
        break;
      }
      case NetworkLayer::Kind::kAvgPool:
        h = avg_pool2d(h, layer.pool_h, layer.pool_w);
        break;
      case NetworkLayer::Kind::kGlobalAvgPool:
        h = global_avg_pool(h);
        break;
      case NetworkLayer::Kind::kDense:
        h = dense_forward(h, layer.dense);
        break;
      case NetworkLayer::Kind::kSoftmax:
        h = softmax(h);
        break;
    }
    cache->outputs[li] = h;
  }
  return h;
}

Tensor Network::backward(const ForwardCache& cache, const Tensor& grad_logits,
                         Gradients* grads) {
  grads->assign(layers.size(), LayerGrads());
  // Skip gradients waiting for the block-opening layer, keyed by its index.
  std::map<int, Tensor> pending;

  Tensor g = grad_logits;
  for (int li = static_cast<int>(layers.size()) - 1; li >= 0; --li) {
    NetworkLayer& layer = layers[li];
    const Tensor& layer_in =
        li == 0 ? cache.input : cache.outputs[static_cast<size_t>(li) - 1];
    switch (layer.kind) {
      case NetworkLayer::Kind::kSoftmax:
        // the loss gradient already differentiates through softmax
        break;
      case NetworkLayer::Kind::kDense: {
        Tensor gi;
        dense_backward(layer_in, layer.dense, g, &gi,
                       &(*grads)[li].dense_weights);
        g = std::move(gi);
        break;
      }
      case NetworkLayer::Kind::kGlobalAvgPool:
        g = global_avg_pool_backward(layer_in, g);
        break;
      case NetworkLayer::Kind::kAvgPool:
        g = avg_pool2d_backward(layer_in, g, layer.pool_h, layer.pool_w);
        break;
      case NetworkLayer::Kind::kConvBn: {
        Tensor g_pre = relu_backward(cache.pre_relu[li], g);
        if (layer.skip_source >= 0) {
          pending[layer.skip_source] = g_pre;  // the skip adds it unchanged
        }
        Tensor g_conv;
        batchnorm_backward(cache.conv_out[li], layer.bn, g_pre,
                           cache.stats[li], &g_conv, &(*grads)[li].bn_gamma,
                           &(*grads)[li].bn_beta);
        Tensor gi;
        conv2d_backward(layer_in, layer.conv, g_conv, &gi,
                        &(*grads)[li].conv_weights);
        g = std::move(gi);
        auto it = pending.find(li);
        if (it != pending.end()) {
          add_inplace(&g, it->second);
          pending.erase(it);
        }
        break;
      }
    }
  }
  return g;
}

Network fold_network(const Network& net) {
  Network folded = net;
  for (auto& layer : folded.layers) {
    if (layer.kind == NetworkLayer::Kind::kConvBn && !layer.folded) {
      layer.conv = fold_batchnorm(layer.conv, layer.bn);
      layer.bn = BatchNormLayer();
      layer.folded = true;
    }
  }
  return folded;
}

int64_t count_params(const Network& net, ParamMode mode) {
  int64_t total = 0;
  for (const auto& layer : net.layers) {
    switch (layer.kind) {
      case NetworkLayer::Kind::kConvBn:
        total += conv_param_count(layer.conv, mode);
        if (mode == ParamMode::kFull && !layer.folded) {
          total += batchnorm_param_count(layer.bn);
        }
        break;
      case NetworkLayer::Kind::kDense:
        total += dense_param_count(layer.dense, mode);
        break;
      default:
        break;
    }
  }
  return total;
}

void save_network(const std::string& path, const Network& net) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");

  uint32_t records = 0;
  for (const auto& layer : net.layers) {
    if (layer.kind == NetworkLayer::Kind::kConvBn) {
      records += 1 + (layer.conv.bias.empty() ? 0 : 1) + (layer.folded ? 0 : 4);
    } else if (layer.kind == NetworkLayer::Kind::kDense) {
      records += 1;
    }
  }

  out.write("ESNW", 4);
  write_u32(out, 1);
  write_u32(out, records);

  int conv_idx = 0;
  for (const auto& layer : net.layers) {
    if (layer.kind == NetworkLayer::Kind::kConvBn) {
      const std::string base = "conv" + std::to_string(conv_idx++);
      const ConvLayer& c = layer.conv;
      write_record(out, base + ".weight",
                   {static_cast<uint32_t>(c.out_channels),
                    static_cast<uint32_t>(c.in_channels),
                    static_cast<uint32_t>(c.kernel_h),
                    static_cast<uint32_t>(c.kernel_w)},
                   c.weights.data.data(), c.weights.data.size());
      if (!c.bias.empty()) {
        write_record(out, base + ".bias",
                     {static_cast<uint32_t>(c.bias.size())}, c.bias.data(),
                     c.bias.size());
      }
      if (!layer.folded) {
        const uint32_t ch = static_cast<uint32_t>(layer.bn.channels());
        write_record(out, base + ".bn.gamma", {ch}, layer.bn.gamma.data(), ch);
        write_record(out, base + ".bn.beta", {ch}, layer.bn.beta.data(), ch);
        write_record(out, base + ".bn.running_mean", {ch},
                     layer.bn.running_mean.data(), ch);
        write_record(out, base + ".bn.running_var", {ch},
                     layer.bn.running_var.data(), ch);
      }
    } else if (layer.kind == NetworkLayer::Kind::kDense) {
      write_record(out, "dense.weight",
                   {static_cast<uint32_t>(layer.dense.out_features),
                    static_cast<uint32_t>(layer.dense.in_features)},
                   layer.dense.weights.data.data(),
                   layer.dense.weights.data.size());
    }
  }
  if (!out) throw IoError("write failed: " + path);
}

void load_network_weights(const std::string& path, Network* net) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "ESNW", 4) != 0) {
    throw ParseError("not a weight file: " + path);
  }
  const uint32_t version = read_u32(in);
  if (version != 1) {
    throw ParseError("unsupported weight file version " +
                     std::to_string(version));
  }
  const uint32_t count = read_u32(in);
  std::map<std::string, Record> records;
  bool has_bn = false;
  for (uint32_t i = 0; i < count; ++i) {
    Record r = read_record(in);
    if (r.name.find(".bn.") != std::string::npos) has_bn = true;
    records.emplace(r.name, std::move(r));
  }

  // A folded checkpoint has biases instead of batch norms.
  if (!has_bn) *net = fold_network(*net);

  auto take = [&](const std::string& name, float* dst, size_t n) {
    auto it = records.find(name);
    if (it == records.end()) {
      throw ParseError("weight file is missing record " + name);
    }
    if (it->second.values.size() != n) {
      throw ParseError("record " + name + " has " +
                       std::to_string(it->second.values.size()) +
                       " values, expected " + std::to_string(n));
    }
    std::memcpy(dst, it->second.values.data(), n * sizeof(float));
    records.erase(it);
  };

  int conv_idx = 0;
  for (auto& layer : net->layers) {
    if (layer.kind == NetworkLayer::Kind::kConvBn) {
      const std::string base = "conv" + std::to_string(conv_idx++);
      take(base + ".weight", layer.conv.weights.data.data(),
           layer.conv.weights.data.size());
      if (layer.folded) {
        layer.conv.bias.assign(layer.conv.out_channels, 0.0f);
        take(base + ".bias", layer.conv.bias.data(), layer.conv.bias.size());
      } else {
        const size_t ch = layer.bn.gamma.size();
        take(base + ".bn.gamma", layer.bn.gamma.data(), ch);
        take(base + ".bn.beta", layer.bn.beta.data(), ch);
        take(base + ".bn.running_mean", layer.bn.running_mean.data(), ch);
        take(base + ".bn.running_var", layer.bn.running_var.data(), ch);
      }
    } else if (layer.kind == NetworkLayer::Kind::kDense) {
      take("dense.weight", layer.dense.weights.data.data(),
           layer.dense.weights.data.size());
    }
  }
  if (!records.empty()) {
    throw ParseError("weight file has unexpected record " +
                     records.begin()->first);
  }
}

}  // namespace esn
