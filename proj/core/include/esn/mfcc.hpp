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

#ifndef ESN_MFCC_HPP_
#define ESN_MFCC_HPP_

#include <string>
#include <vector>

#include "esn/audio.hpp"

namespace esn {

// Frame/filterbank parameters. Defaults: 30 ms Hamming window, 10 ms shift,
// 512-point FFT, 40 mel filters between 20 Hz and 4 kHz, natural log with a
// 1e-10 floor, orthonormal DCT-II keeping all 40 coefficients.
struct MfccConfig {
  int window_ms = 30;
  int shift_ms = 10;
  int fft_size = 512;
  int mel_filter_count = 40;
  int coeff_count = 40;
  double mel_low_hz = 20.0;
  double mel_high_hz = 4000.0;
  double log_floor = 1e-10;

  int window_samples(int sample_rate_hz) const {
    return window_ms * sample_rate_hz / 1000;
  }
  int shift_samples(int sample_rate_hz) const {
    return shift_ms * sample_rate_hz / 1000;
  }
};

// Frame-major feature matrix: values[frame * coeff_count + coeff].
struct MfccMatrix {
  std::vector<float> values;
  int frame_count = 0;
  int coeff_count = 0;

  float at(int frame, int coeff) const {
    return values[static_cast<size_t>(frame) * coeff_count + coeff];
  }
};

// Triangular mel filterbank, one row per filter, one column per FFT bin
// (fft_size/2 + 1 columns). Triangles are linear in mel, so adjacent
// filters sum to at most 1 at any bin.
std::vector<std::vector<double>> make_mel_filterbank(const MfccConfig& cfg,
                                                     int sample_rate_hz);

// Windowed frames at [shift*i, shift*i + window); a one-second clip yields
// exactly 98 frames with the default config. The clip is expected to be
// band-pass filtered already.
MfccMatrix compute_mfcc(const AudioClip& clip, const MfccConfig& cfg = {});

// load_wav -> bandpass_filter -> compute_mfcc.
MfccMatrix preprocess(const std::string& wav_path, const MfccConfig& cfg = {});

// Feature matrix file: magic "ESMF", u32 version=1, u32 frame_count,
// u32 coeff_count, then frame-major f32 little-endian values.
void save_esmf(const std::string& path, const MfccMatrix& m);
MfccMatrix load_esmf(const std::string& path);

}  // namespace esn

#endif  // ESN_MFCC_HPP_
