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

#include "esn/tensor.hpp"

#include <cmath>

#include "esn/errors.hpp"

namespace esn {

Tensor::Tensor(std::vector<int> s) : shape(std::move(s)) {
  int64_t n = 1;
  for (int d : shape) n *= d;
  data.assign(static_cast<size_t>(n), 0.0f);
}

int64_t Tensor::numel() const {
  int64_t n = 1;
  for (int d : shape) n *= d;
  return n;
}

bool Tensor::all_finite() const {
  for (float v : data) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

Tensor unsqueeze_batch(const Tensor& t) {
  Tensor out = t;
  out.shape.insert(out.shape.begin(), 1);
  return out;
}

Tensor squeeze_batch(const Tensor& t) {
  if (t.rank() < 1 || t.dim(0) != 1) {
    throw ShapeMismatch("squeeze_batch: leading dimension is not 1");
  }
  Tensor out = t;
  out.shape.erase(out.shape.begin());
  return out;
}

void add_inplace(Tensor* dst, const Tensor& src) {
  if (!dst->same_shape(src)) throw ShapeMismatch("add: shape mismatch");
  for (size_t i = 0; i < src.data.size(); ++i) dst->data[i] += src.data[i];
}

}  // namespace esn
