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

#include "esn/fft.hpp"

#include <cmath>
#include <cstddef>
#include <string>

#include "esn/errors.hpp"

namespace esn {

static bool is_power_of_two(size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

void fft_radix2(std::vector<double>* re, std::vector<double>* im,
                bool inverse) {
  const size_t n = re->size();
  if (im->size() != n) {
    throw ShapeMismatch("fft: re/im length mismatch");
  }
  if (n == 1) return;
  if (!is_power_of_two(n)) {
    throw FftSizeNotPowerOfTwo("fft size " + std::to_string(n) +
                               " is not a power of two");
  }
  double* xr = re->data();
  double* xi = im->data();

  // bit-reversal permutation
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) {
      std::swap(xr[i], xr[j]);
      std::swap(xi[i], xi[j]);
    }
  }

  const double sign = inverse ? 1.0 : -1.0;
  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * M_PI / static_cast<double>(len);
    const double wr = std::cos(ang);
    const double wi = std::sin(ang);
    for (size_t i = 0; i < n; i += len) {
      double cr = 1.0, ci = 0.0;
      for (size_t k = 0; k < len / 2; ++k) {
        const size_t a = i + k;
        const size_t b = i + k + len / 2;
        const double tr = cr * xr[b] - ci * xi[b];
        const double ti = cr * xi[b] + ci * xr[b];
        xr[b] = xr[a] - tr;
        xi[b] = xi[a] - ti;
        xr[a] += tr;
        xi[a] += ti;
        const double ncr = cr * wr - ci * wi;
        ci = cr * wi + ci * wr;
        cr = ncr;
      }
    }
  }

  if (inverse) {
    const double inv = 1.0 / static_cast<double>(n);
    for (size_t i = 0; i < n; ++i) {
      xr[i] *= inv;
      xi[i] *= inv;
    }
  }
}

std::vector<double> power_spectrum(const std::vector<double>& frame,
                                   int fft_size) {
  if (fft_size < 2 || !is_power_of_two(static_cast<size_t>(fft_size))) {
    throw FftSizeNotPowerOfTwo("fft size " + std::to_string(fft_size) +
                               " is not a power of two");
  }
  if (frame.size() > static_cast<size_t>(fft_size)) {
    throw ShapeMismatch("frame longer than fft size");
  }
  std::vector<double> re(fft_size, 0.0);
  std::vector<double> im(fft_size, 0.0);
  std::copy(frame.begin(), frame.end(), re.begin());
  fft_radix2(&re, &im);
  std::vector<double> power(fft_size / 2 + 1);
  for (int k = 0; k <= fft_size / 2; ++k) {
    power[k] = re[k] * re[k] + im[k] * im[k];
  }
  return power;
}

}  // namespace esn
