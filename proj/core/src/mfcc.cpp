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

#include "esn/mfcc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "esn/errors.hpp"
#include "esn/fft.hpp"

namespace esn {

namespace {

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

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
  if (!in) throw ParseError("unexpected end of feature file");
  return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
         (static_cast<uint32_t>(b[2]) << 16) |
         (static_cast<uint32_t>(b[3]) << 24);
}

}  // namespace

std::vector<std::vector<double>> make_mel_filterbank(const MfccConfig& cfg,
                                                     int sample_rate_hz) {
  const int bins = cfg.fft_size / 2 + 1;
  const double mel_low = hz_to_mel(cfg.mel_low_hz);
  const double mel_high = hz_to_mel(cfg.mel_high_hz);
  const int n = cfg.mel_filter_count;

  // n filters need n+2 equally spaced points in mel
  std::vector<double> mel_points(n + 2);
  for (int i = 0; i < n + 2; ++i) {
    mel_points[i] = mel_low + (mel_high - mel_low) * i / (n + 1);
  }

  std::vector<std::vector<double>> bank(n, std::vector<double>(bins, 0.0));
  for (int f = 0; f < n; ++f) {
    const double left = mel_points[f];
    const double center = mel_points[f + 1];
    const double right = mel_points[f + 2];
    for (int k = 0; k < bins; ++k) {
      const double hz = static_cast<double>(k) * sample_rate_hz / cfg.fft_size;
      const double mel = hz_to_mel(hz);
      if (mel <= left || mel >= right) continue;
      bank[f][k] = mel < center ? (mel - left) / (center - left)
                                : (right - mel) / (right - center);
    }
  }
  return bank;
}

MfccMatrix compute_mfcc(const AudioClip& clip, const MfccConfig& cfg) {
  const int win = cfg.window_samples(clip.sample_rate_hz);
  const int shift = cfg.shift_samples(clip.sample_rate_hz);
  if (cfg.fft_size < win) {
    throw ShapeMismatch("fft size smaller than window");
  }
  const int frames =
      (static_cast<int>(clip.samples.size()) - win) / shift + 1;

  std::vector<double> hamming(win);
  for (int j = 0; j < win; ++j) {
    hamming[j] = 0.54 - 0.46 * std::cos(2.0 * M_PI * j / (win - 1));
  }

  const auto bank = make_mel_filterbank(cfg, clip.sample_rate_hz);

  // orthonormal DCT-II basis: [coeff][filter]
  const int nf = cfg.mel_filter_count;
  std::vector<std::vector<double>> dct(cfg.coeff_count,
                                       std::vector<double>(nf));
  for (int k = 0; k < cfg.coeff_count; ++k) {
    const double scale = std::sqrt((k == 0 ? 1.0 : 2.0) / nf);
    for (int j = 0; j < nf; ++j) {
      dct[k][j] = scale * std::cos(M_PI * (2.0 * j + 1.0) * k / (2.0 * nf));
    }
  }

  MfccMatrix out;
  out.frame_count = frames;
  out.coeff_count = cfg.coeff_count;
  out.values.resize(static_cast<size_t>(frames) * cfg.coeff_count);

  std::vector<double> frame(win);
  std::vector<double> log_energies(nf);
  for (int i = 0; i < frames; ++i) {
    const int start = i * shift;
    for (int j = 0; j < win; ++j) {
      frame[j] = hamming[j] * static_cast<double>(clip.samples[start + j]);
    }
    const auto power = power_spectrum(frame, cfg.fft_size);
    for (int f = 0; f < nf; ++f) {
      double e = 0.0;
      const auto& row = bank[f];
      for (size_t k = 0; k < power.size(); ++k) e += row[k] * power[k];
      log_energies[f] = std::log(std::max(e, cfg.log_floor));
    }
    for (int k = 0; k < cfg.coeff_count; ++k) {
      double c = 0.0;
      for (int j = 0; j < nf; ++j) c += dct[k][j] * log_energies[j];
      out.values[static_cast<size_t>(i) * cfg.coeff_count + k] =
          static_cast<float>(c);
    }
  }
  return out;
}

MfccMatrix preprocess(const std::string& wav_path, const MfccConfig& cfg) {
  return compute_mfcc(bandpass_filter(load_wav(wav_path)), cfg);
}

void save_esmf(const std::string& path, const MfccMatrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write("ESMF", 4);
  write_u32(out, 1);
  write_u32(out, static_cast<uint32_t>(m.frame_count));
  write_u32(out, static_cast<uint32_t>(m.coeff_count));
  for (float v : m.values) {
    uint32_t bits;
    std::memcpy(&bits, &v, 4);
    write_u32(out, bits);
  }
  if (!out) throw IoError("write failed: " + path);
}

MfccMatrix load_esmf(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "ESMF", 4) != 0) {
    throw ParseError("not a feature matrix file: " + path);
  }
  const uint32_t version = read_u32(in);
  if (version != 1) {
    throw ParseError("unsupported feature file version " +
                     std::to_string(version));
  }
  MfccMatrix m;
  m.frame_count = static_cast<int>(read_u32(in));
  m.coeff_count = static_cast<int>(read_u32(in));
  const size_t n = static_cast<size_t>(m.frame_count) * m.coeff_count;
  m.values.resize(n);
  for (size_t i = 0; i < n; ++i) {
    uint32_t bits = read_u32(in);
    std::memcpy(&m.values[i], &bits, 4);
  }
  return m;
}

}  // namespace esn
