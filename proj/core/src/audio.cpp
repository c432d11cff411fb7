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

#include "esn/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "esn/errors.hpp"

namespace esn {

namespace {

uint32_t read_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (!in) throw MalformedWav("unexpected end of file");
  return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
         (static_cast<uint32_t>(b[2]) << 16) |
         (static_cast<uint32_t>(b[3]) << 24);
}

uint16_t read_u16(std::istream& in) {
  unsigned char b[2];
  in.read(reinterpret_cast<char*>(b), 2);
  if (!in) throw MalformedWav("unexpected end of file");
  return static_cast<uint16_t>(b[0] | (b[1] << 8));
}

void read_tag(std::istream& in, char tag[4]) {
  in.read(tag, 4);
  if (!in) throw MalformedWav("unexpected end of file");
}

void write_u32(std::ostream& out, uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                        static_cast<unsigned char>((v >> 8) & 0xff),
                        static_cast<unsigned char>((v >> 16) & 0xff),
                        static_cast<unsigned char>((v >> 24) & 0xff)};
  out.write(reinterpret_cast<char*>(b), 4);
}

void write_u16(std::ostream& out, uint16_t v) {
  unsigned char b[2] = {static_cast<unsigned char>(v & 0xff),
                        static_cast<unsigned char>((v >> 8) & 0xff)};
  out.write(reinterpret_cast<char*>(b), 2);
}

}  // namespace

std::vector<float> load_wav_samples(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);

  char tag[4];
  read_tag(in, tag);
  if (std::memcmp(tag, "RIFF", 4) != 0) throw MalformedWav("missing RIFF tag");
  read_u32(in);  // overall size, unused
  read_tag(in, tag);
  if (std::memcmp(tag, "WAVE", 4) != 0) throw MalformedWav("missing WAVE tag");

  bool have_fmt = false;
  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  std::vector<int16_t> pcm;
  bool have_data = false;

  while (!have_data) {
    char chunk[4];
    in.read(chunk, 4);
    if (!in) break;  // ran out of chunks
    uint32_t size = read_u32(in);
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16) throw MalformedWav("fmt chunk too small");
      format = read_u16(in);
      channels = read_u16(in);
      rate = read_u32(in);
      read_u32(in);  // byte rate
      read_u16(in);  // block align
      bits = read_u16(in);
      in.ignore(size - 16 + (size & 1));
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      if (!have_fmt) throw MalformedWav("data chunk before fmt chunk");
      pcm.resize(size / 2);
      in.read(reinterpret_cast<char*>(pcm.data()), size & ~1u);
      if (!in) throw MalformedWav("truncated data chunk");
      have_data = true;
    } else {
      // skip unrelated chunks (LIST, fact, ...), padded to even size
      in.ignore(size + (size & 1));
      if (!in) throw MalformedWav("truncated chunk");
    }
  }
  if (!have_fmt || !have_data) throw MalformedWav("missing fmt or data chunk");

  if (format != 1 || channels != 1 || rate != kSampleRateHz || bits != 16) {
    throw UnsupportedFormat(
        "need 16-bit PCM mono 16000 Hz, found format=" + std::to_string(format) +
        " channels=" + std::to_string(channels) +
        " rate=" + std::to_string(rate) + " bits=" + std::to_string(bits));
  }

  std::vector<float> samples(pcm.size());
  for (size_t i = 0; i < pcm.size(); ++i) {
    samples[i] = static_cast<float>(pcm[i]) / 32768.0f;
  }
  return samples;
}

AudioClip load_wav(const std::string& path) {
  std::vector<float> samples = load_wav_samples(path);
  AudioClip clip;
  clip.sample_rate_hz = kSampleRateHz;
  clip.samples.assign(kClipSamples, 0.0f);
  const size_t n = std::min<size_t>(samples.size(), kClipSamples);
  std::copy(samples.begin(), samples.begin() + n, clip.samples.begin());
  return clip;
}

void save_wav(const std::string& path, const AudioClip& clip) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");

  const uint32_t data_bytes = static_cast<uint32_t>(clip.samples.size() * 2);
  out.write("RIFF", 4);
  write_u32(out, 36 + data_bytes);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  write_u32(out, 16);
  write_u16(out, 1);  // PCM
  write_u16(out, 1);  // mono
  write_u32(out, static_cast<uint32_t>(clip.sample_rate_hz));
  write_u32(out, static_cast<uint32_t>(clip.sample_rate_hz) * 2);
  write_u16(out, 2);
  write_u16(out, 16);
  out.write("data", 4);
  write_u32(out, data_bytes);
  for (float s : clip.samples) {
    long v = std::lround(static_cast<double>(s) * 32768.0);
    v = std::clamp(v, -32768L, 32767L);
    write_u16(out, static_cast<uint16_t>(static_cast<int16_t>(v)));
  }
  if (!out) throw IoError("write failed: " + path);
}

namespace {

// RBJ bilinear-transform biquads with Q = 1/sqrt(2) (maximally flat).
struct RawCoeffs {
  double b0, b1, b2, a0, a1, a2;
};

Biquad normalize(const RawCoeffs& c) {
  Biquad q;
  q.b0 = c.b0 / c.a0;
  q.b1 = c.b1 / c.a0;
  q.b2 = c.b2 / c.a0;
  q.a1 = c.a1 / c.a0;
  q.a2 = c.a2 / c.a0;
  return q;
}

}  // namespace

Biquad butterworth_lowpass(double cutoff_hz, double sample_rate_hz) {
  const double w0 = 2.0 * M_PI * cutoff_hz / sample_rate_hz;
  const double cw = std::cos(w0);
  const double alpha = std::sin(w0) / std::sqrt(2.0);
  return normalize({(1.0 - cw) / 2.0, 1.0 - cw, (1.0 - cw) / 2.0,
                    1.0 + alpha, -2.0 * cw, 1.0 - alpha});
}

Biquad butterworth_highpass(double cutoff_hz, double sample_rate_hz) {
  const double w0 = 2.0 * M_PI * cutoff_hz / sample_rate_hz;
  const double cw = std::cos(w0);
  const double alpha = std::sin(w0) / std::sqrt(2.0);
  return normalize({(1.0 + cw) / 2.0, -(1.0 + cw), (1.0 + cw) / 2.0,
                    1.0 + alpha, -2.0 * cw, 1.0 - alpha});
}

AudioClip bandpass_filter(const AudioClip& clip) {
  Biquad hp = butterworth_highpass(20.0, clip.sample_rate_hz);
  Biquad lp = butterworth_lowpass(4000.0, clip.sample_rate_hz);
  AudioClip out;
  out.sample_rate_hz = clip.sample_rate_hz;
  out.samples.resize(clip.samples.size());
  for (size_t i = 0; i < clip.samples.size(); ++i) {
    out.samples[i] = lp.process(hp.process(clip.samples[i]));
  }
  return out;
}

}  // namespace esn
