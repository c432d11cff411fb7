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

#ifndef ESN_TENSOR_HPP_
#define ESN_TENSOR_HPP_

#include <cstdint>
#include <vector>

namespace esn {

// Dense row-major float tensor.
struct Tensor {
  std::vector<int> shape;
  std::vector<float> data;

  Tensor() = default;
  explicit Tensor(std::vector<int> s);

  static Tensor zeros(std::vector<int> s) { return Tensor(std::move(s)); }

  int rank() const { return static_cast<int>(shape.size()); }
  int dim(int i) const { return shape[static_cast<size_t>(i)]; }
  int64_t numel() const;

  float& at(int i) { return data[static_cast<size_t>(i)]; }
  float at(int i) const { return data[static_cast<size_t>(i)]; }
  float& at(int i, int j) { return data[static_cast<size_t>(i) * dim(1) + j]; }
  float at(int i, int j) const {
    return data[static_cast<size_t>(i) * dim(1) + j];
  }
  float& at(int i, int j, int k) {
    return data[(static_cast<size_t>(i) * dim(1) + j) * dim(2) + k];
  }
  float at(int i, int j, int k) const {
    return data[(static_cast<size_t>(i) * dim(1) + j) * dim(2) + k];
  }
  float& at(int i, int j, int k, int l) {
    return data[((static_cast<size_t>(i) * dim(1) + j) * dim(2) + k) * dim(3) +
                l];
  }
  float at(int i, int j, int k, int l) const {
    return data[((static_cast<size_t>(i) * dim(1) + j) * dim(2) + k) * dim(3) +
                l];
  }

  bool same_shape(const Tensor& other) const { return shape == other.shape; }
  bool all_finite() const;
};

// Returns a 4-D [N,C,H,W] view of a [C,H,W] tensor (copies; tensors are
// small enough that views are not worth the aliasing rules).
Tensor unsqueeze_batch(const Tensor& t);
Tensor squeeze_batch(const Tensor& t);

void add_inplace(Tensor* dst, const Tensor& src);  // dst += src

}  // namespace esn

#endif  // ESN_TENSOR_HPP_
