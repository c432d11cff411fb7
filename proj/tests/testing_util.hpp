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
//
// Test-only oracles, independent of the library implementation paths they
// check: a naive DFT, double-precision reference layers for finite
// differences, and small fixture helpers.

#ifndef ESN_TESTS_TESTING_UTIL_HPP_
#define ESN_TESTS_TESTING_UTIL_HPP_

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "esn/audio.hpp"
#include "esn/random.hpp"
#include "esn/tensor.hpp"

namespace esn::testing {

// ---------------------------------------------------------------- fixtures

inline std::filesystem::path make_temp_dir(const std::string& tag) {
  static uint64_t counter = 0;
  auto dir = std::filesystem::temp_directory_path() /
             ("esn_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
              std::to_string(counter++));
  std::filesystem::create_directories(dir);
  return dir;
}

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) : path(make_temp_dir(tag)) {}
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

inline AudioClip make_sine(double freq_hz, double amplitude = 1.0,
                           int samples = kClipSamples) {
  AudioClip clip;
  clip.samples.resize(samples);
  for (int i = 0; i < samples; ++i) {
    clip.samples[i] = static_cast<float>(
        amplitude * std::sin(2.0 * M_PI * freq_hz * i / kSampleRateHz));
  }
  return clip;
}

inline AudioClip make_noise(uint64_t seed, double amplitude = 0.1,
                            int samples = kClipSamples) {
  Prng rng(seed);
  AudioClip clip;
  clip.samples.resize(samples);
  for (int i = 0; i < samples; ++i) {
    clip.samples[i] =
        static_cast<float>(amplitude * (2.0 * rng.uniform() - 1.0));
  }
  return clip;
}

inline double rms(const float* x, size_t n) {
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i) acc += static_cast<double>(x[i]) * x[i];
  return std::sqrt(acc / static_cast<double>(n));
}

inline Tensor random_tensor(std::vector<int> shape, uint64_t seed,
                            double scale = 1.0) {
  Tensor t(std::move(shape));
  Prng rng(seed);
  for (float& v : t.data) {
    v = static_cast<float>(scale * (2.0 * rng.uniform() - 1.0));
  }
  return t;
}

// ------------------------------------------------------------- DFT oracle

inline std::vector<std::complex<double>> naive_dft(
    const std::vector<double>& x) {
  const size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  for (size_t k = 0; k < n; ++k) {
    std::complex<double> acc = 0.0;
    for (size_t j = 0; j < n; ++j) {
      const double ang = -2.0 * M_PI * static_cast<double>(k) * j / n;
      acc += x[j] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
  return out;
}

// ------------------------------------------- double-precision reference ops
// All reference tensors are flat doubles with explicit dimensions; shapes
// mirror the float engine: images [N,C,H,W], conv weights [O,C,kh,kw].

namespace ref {

using Vec = std::vector<double>;

inline Vec conv2d(const Vec& x, int n, int c, int h, int w, const Vec& wt,
                  int out_c, int kh, int kw, const Vec& bias = {}) {
  const int pad_t = (kh - 1) / 2;
  const int pad_l = (kw - 1) / 2;
  Vec y(static_cast<size_t>(n) * out_c * h * w, 0.0);
  for (int img = 0; img < n; ++img) {
    for (int o = 0; o < out_c; ++o) {
      for (int oh = 0; oh < h; ++oh) {
        for (int ow = 0; ow < w; ++ow) {
          double acc = bias.empty() ? 0.0 : bias[o];
          for (int ci = 0; ci < c; ++ci) {
            for (int ki = 0; ki < kh; ++ki) {
              const int ih = oh + ki - pad_t;
              if (ih < 0 || ih >= h) continue;
              for (int kj = 0; kj < kw; ++kj) {
                const int iw = ow + kj - pad_l;
                if (iw < 0 || iw >= w) continue;
                acc += x[((static_cast<size_t>(img) * c + ci) * h + ih) * w +
                         iw] *
                       wt[((static_cast<size_t>(o) * c + ci) * kh + ki) * kw +
                          kj];
              }
            }
          }
          y[((static_cast<size_t>(img) * out_c + o) * h + oh) * w + ow] = acc;
        }
      }
    }
  }
  return y;
}

inline Vec batchnorm_train(const Vec& x, int n, int c, int h, int w,
                           const Vec& gamma, const Vec& beta,
                           double eps = 1e-5) {
  const size_t plane = static_cast<size_t>(h) * w;
  const double m = static_cast<double>(n) * plane;
  Vec y(x.size());
  for (int ci = 0; ci < c; ++ci) {
    double sum = 0.0, sq = 0.0;
    for (int img = 0; img < n; ++img) {
      const double* p = x.data() + (static_cast<size_t>(img) * c + ci) * plane;
      for (size_t i = 0; i < plane; ++i) {
        sum += p[i];
        sq += p[i] * p[i];
      }
    }
    const double mu = sum / m;
    const double var = std::max(0.0, sq / m - mu * mu);
    const double inv_std = 1.0 / std::sqrt(var + eps);
    for (int img = 0; img < n; ++img) {
      const double* p = x.data() + (static_cast<size_t>(img) * c + ci) * plane;
      double* q = y.data() + (static_cast<size_t>(img) * c + ci) * plane;
      for (size_t i = 0; i < plane; ++i) {
        q[i] = gamma[ci] * (p[i] - mu) * inv_std + beta[ci];
      }
    }
  }
  return y;
}

inline Vec relu(const Vec& x) {
  Vec y = x;
  for (double& v : y) v = std::max(v, 0.0);
  return y;
}

inline Vec global_avg_pool(const Vec& x, int n, int c, int h, int w) {
  const size_t plane = static_cast<size_t>(h) * w;
  Vec y(static_cast<size_t>(n) * c, 0.0);
  for (int img = 0; img < n; ++img) {
    for (int ci = 0; ci < c; ++ci) {
      double acc = 0.0;
      const double* p = x.data() + (static_cast<size_t>(img) * c + ci) * plane;
      for (size_t i = 0; i < plane; ++i) acc += p[i];
      y[static_cast<size_t>(img) * c + ci] = acc / static_cast<double>(plane);
    }
  }
  return y;
}

inline Vec avg_pool2d(const Vec& x, int n, int c, int h, int w, int ph,
                      int pw) {
  const int oh = (h + ph - 1) / ph;
  const int ow = (w + pw - 1) / pw;
  Vec y(static_cast<size_t>(n) * c * oh * ow, 0.0);
  for (int img = 0; img < n; ++img) {
    for (int ci = 0; ci < c; ++ci) {
      const double* src = x.data() + (static_cast<size_t>(img) * c + ci) *
                                         static_cast<size_t>(h) * w;
      double* dst = y.data() + (static_cast<size_t>(img) * c + ci) *
                                   static_cast<size_t>(oh) * ow;
      for (int i = 0; i < oh; ++i) {
        for (int j = 0; j < ow; ++j) {
          const int h1 = std::min(h, (i + 1) * ph);
          const int w1 = std::min(w, (j + 1) * pw);
          double acc = 0.0;
          for (int yy = i * ph; yy < h1; ++yy) {
            for (int xx = j * pw; xx < w1; ++xx) acc += src[yy * w + xx];
          }
          dst[i * ow + j] = acc / ((h1 - i * ph) * (w1 - j * pw));
        }
      }
    }
  }
  return y;
}

inline Vec dense(const Vec& x, int n, int f, const Vec& wt, int out) {
  Vec y(static_cast<size_t>(n) * out, 0.0);
  for (int img = 0; img < n; ++img) {
    for (int o = 0; o < out; ++o) {
      double acc = 0.0;
      for (int i = 0; i < f; ++i) {
        acc += wt[static_cast<size_t>(o) * f + i] *
               x[static_cast<size_t>(img) * f + i];
      }
      y[static_cast<size_t>(img) * out + o] = acc;
    }
  }
  return y;
}

// mean cross-entropy of softmax(logits) against labels
inline double softmax_ce(const Vec& logits, int n, int k,
                         const std::vector<int>& labels) {
  double total = 0.0;
  for (int img = 0; img < n; ++img) {
    const double* row = logits.data() + static_cast<size_t>(img) * k;
    double mx = row[0];
    for (int i = 1; i < k; ++i) mx = std::max(mx, row[i]);
    double denom = 0.0;
    for (int i = 0; i < k; ++i) denom += std::exp(row[i] - mx);
    total += -(row[labels[img]] - mx - std::log(denom));
  }
  return total / n;
}

}  // namespace ref

// -------------------------------------------------------- finite differences

// Central finite differences of loss() with respect to each entry of
// params, in double precision, h = 1e-3.
inline std::vector<double> finite_diff(std::vector<double>* params,
                                       const std::function<double()>& loss,
                                       double h = 1e-3) {
  std::vector<double> grad(params->size());
  for (size_t i = 0; i < params->size(); ++i) {
    const double keep = (*params)[i];
    (*params)[i] = keep + h;
    const double up = loss();
    (*params)[i] = keep - h;
    const double down = loss();
    (*params)[i] = keep;
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

// |a - b| <= rtol*max(|a|,|b|) + atol
inline bool close(double a, double b, double rtol = 1e-3,
                  double atol = 1e-6) {
  return std::abs(a - b) <= rtol * std::max(std::abs(a), std::abs(b)) + atol;
}

struct GradCheckResult {
  size_t checked = 0;
  size_t failed = 0;
  double worst_abs_diff = 0.0;
};

inline GradCheckResult compare_grads(const std::vector<double>& fd,
                                     const float* analytic, size_t n,
                                     double rtol = 1e-3,
                                     double atol = 1e-6) {
  GradCheckResult res;
  res.checked = n;
  for (size_t i = 0; i < n; ++i) {
    const double a = fd[i];
    const double b = static_cast<double>(analytic[i]);
    if (!close(a, b, rtol, atol)) ++res.failed;
    res.worst_abs_diff = std::max(res.worst_abs_diff, std::abs(a - b));
  }
  return res;
}

inline std::vector<double> to_double(const std::vector<float>& v) {
  return std::vector<double>(v.begin(), v.end());
}

}  // namespace esn::testing

#endif  // ESN_TESTS_TESTING_UTIL_HPP_
