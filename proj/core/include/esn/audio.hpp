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

#ifndef ESN_AUDIO_HPP_
#define ESN_AUDIO_HPP_

#include <string>
#include <vector>

namespace esn {

constexpr int kSampleRateHz = 16000;
constexpr int kClipSamples = 16000;  // exactly one second

// One second of mono audio, amplitudes in [-1, 1].
struct AudioClip {
  std::vector<float> samples;
  int sample_rate_hz = kSampleRateHz;
};

// Reads a RIFF/WAVE file: 16-bit PCM, mono, 16 kHz. Anything else is
// UnsupportedFormat (the message says what was found); structural problems
// are MalformedWav. int16 samples are scaled by 1/32768, and the clip is
// zero-padded or truncated to exactly one second.
AudioClip load_wav(const std::string& path);

// Same format checks, but keeps every sample. For material longer than a
// clip, e.g. background-noise recordings.
std::vector<float> load_wav_samples(const std::string& path);

// Writes a clip as 16-bit PCM mono. Used by tools and test fixtures.
void save_wav(const std::string& path, const AudioClip& clip);

// Single second-order IIR section (direct form II transposed, double state).
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;
  double z1 = 0.0, z2 = 0.0;

  float process(float x) {
    const double y = b0 * x + z1;
    z1 = b1 * x - a1 * y + z2;
    z2 = b2 * x - a2 * y;
    return static_cast<float>(y);
  }
};

// Second-order Butterworth sections (bilinear transform, Q = 1/sqrt(2)).
Biquad butterworth_lowpass(double cutoff_hz, double sample_rate_hz);
Biquad butterworth_highpass(double cutoff_hz, double sample_rate_hz);

// Causal 20 Hz - 4 kHz band-pass: high-pass and low-pass Butterworth
// sections in cascade. Pure: returns a new clip of identical length.
AudioClip bandpass_filter(const AudioClip& clip);

}  // namespace esn

#endif  // ESN_AUDIO_HPP_
