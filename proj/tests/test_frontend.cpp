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

#include <doctest.h>

#include <cstring>
#include <fstream>

#include "esn/errors.hpp"
#include "esn/mfcc.hpp"
#include "testing_util.hpp"

using namespace esn;
namespace tt = esn::testing;

TEST_SUITE("frontend") {

// ------------------------------------------------------------------ wav io

TEST_CASE("short clips are zero-padded to one second") {
  tt::TempDir dir("wav_pad");
  AudioClip half = tt::make_sine(440.0, 0.5, 8000);
  save_wav(dir.file("half.wav"), half);

  AudioClip loaded = load_wav(dir.file("half.wav"));
  REQUIRE(loaded.samples.size() == 16000);
  for (size_t i = 8000; i < 16000; ++i) CHECK(loaded.samples[i] == 0.0f);
  CHECK(tt::rms(loaded.samples.data(), 8000) > 0.1);
}

TEST_CASE("long clips are truncated to one second") {
  tt::TempDir dir("wav_trunc");
  save_wav(dir.file("long.wav"), tt::make_sine(440.0, 0.5, 24000));
  CHECK(load_wav(dir.file("long.wav")).samples.size() == 16000);
}

TEST_CASE("int16 minimum maps to exactly -1.0") {
  tt::TempDir dir("wav_scale");
  AudioClip clip;
  clip.samples.assign(16000, 0.0f);
  clip.samples[0] = -1.0f;  // save_wav writes -32768
  clip.samples[1] = 1.0f;   // clamps to 32767
  save_wav(dir.file("scale.wav"), clip);

  AudioClip loaded = load_wav(dir.file("scale.wav"));
  CHECK(loaded.samples[0] == -1.0f);
  CHECK(loaded.samples[1] == doctest::Approx(32767.0f / 32768.0f));
}

namespace {

// Hand-built header for formats save_wav never produces.
void write_custom_wav(const std::string& path, uint16_t channels,
                      uint32_t rate, uint16_t bits) {
  std::ofstream out(path, std::ios::binary);
  auto u32 = [&](uint32_t v) { out.write(reinterpret_cast<char*>(&v), 4); };
  auto u16 = [&](uint16_t v) { out.write(reinterpret_cast<char*>(&v), 2); };
  out.write("RIFF", 4);
  u32(36 + 8);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  u32(16);
  u16(1);
  u16(channels);
  u32(rate);
  u32(rate * channels * bits / 8);
  u16(static_cast<uint16_t>(channels * bits / 8));
  u16(bits);
  out.write("data", 4);
  u32(8);
  for (int i = 0; i < 8; ++i) out.put(0);
}

}  // namespace

TEST_CASE("stereo 44.1 kHz input is an unsupported format") {
  tt::TempDir dir("wav_fmt");
  write_custom_wav(dir.file("stereo.wav"), 2, 44100, 16);
  try {
    load_wav(dir.file("stereo.wav"));
    FAIL("expected UnsupportedFormat");
  } catch (const UnsupportedFormat& e) {
    // the message reports what was found
    CHECK(std::string(e.what()).find("44100") != std::string::npos);
    CHECK(std::string(e.what()).find("channels=2") != std::string::npos);
  }
}

TEST_CASE("wrong sample rate alone is rejected") {
  tt::TempDir dir("wav_rate");
  write_custom_wav(dir.file("8k.wav"), 1, 8000, 16);
  CHECK_THROWS_AS(load_wav(dir.file("8k.wav")), UnsupportedFormat);
}

TEST_CASE("garbage bytes are a malformed wav") {
  tt::TempDir dir("wav_bad");
  std::ofstream(dir.file("bad.wav")) << "definitely not RIFF data";
  CHECK_THROWS_AS(load_wav(dir.file("bad.wav")), MalformedWav);
}

TEST_CASE("missing file reports an io error") {
  CHECK_THROWS_AS(load_wav("/nonexistent/nope.wav"), IoError);
}

// --------------------------------------------------------------- band-pass

TEST_CASE("band-pass of silence is silence") {
  AudioClip zero;
  zero.samples.assign(16000, 0.0f);
  AudioClip out = bandpass_filter(zero);
  REQUIRE(out.samples.size() == 16000);
  for (float v : out.samples) CHECK(v == 0.0f);
}

TEST_CASE("1 kHz tone passes within 3 dB") {
  AudioClip in = tt::make_sine(1000.0);
  AudioClip out = bandpass_filter(in);
  const double in_rms = tt::rms(in.samples.data() + 1000, 15000);
  const double out_rms = tt::rms(out.samples.data() + 1000, 15000);
  const double db = 20.0 * std::log10(out_rms / in_rms);
  CHECK(db > -3.0);
  CHECK(db < 3.0);
}

TEST_CASE("constant offset is removed in the steady state") {
  AudioClip in;
  in.samples.assign(16000, 0.5f);
  AudioClip out = bandpass_filter(in);
  const double out_rms = tt::rms(out.samples.data() + 8000, 8000);
  CHECK(out_rms <= 0.25 * 0.5);
}

TEST_CASE("stop-band probes are attenuated at least 12 dB") {
  auto steady_rms = [](double freq) {
    AudioClip out = bandpass_filter(tt::make_sine(freq));
    return tt::rms(out.samples.data() + 8000, 8000);
  };
  const double ref = steady_rms(1000.0);
  CHECK(20.0 * std::log10(steady_rms(5.0) / ref) <= -12.0);
  CHECK(20.0 * std::log10(steady_rms(6000.0) / ref) <= -12.0);
}

TEST_CASE("band-pass is linear in its input") {
  AudioClip x = tt::make_noise(99, 0.5);
  const float a = 0.37f;
  AudioClip ax = x;
  for (float& v : ax.samples) v *= a;

  AudioClip fx = bandpass_filter(x);
  AudioClip fax = bandpass_filter(ax);
  for (size_t i = 0; i < fx.samples.size(); ++i) {
    CHECK(std::abs(fax.samples[i] - a * fx.samples[i]) < 1e-6);
  }
}

// -------------------------------------------------------------------- mfcc

TEST_CASE("one-second clip yields a 98x40 matrix") {
  MfccMatrix m = compute_mfcc(tt::make_noise(5));
  CHECK(m.frame_count == 98);
  CHECK(m.coeff_count == 40);
  CHECK(m.values.size() == 98u * 40u);
}

TEST_CASE("all-zero clip yields the DCT of the log floor") {
  AudioClip zero;
  zero.samples.assign(16000, 0.0f);
  MfccMatrix m = compute_mfcc(zero);

  // orthonormal DCT of a constant vector: c0 = value * sqrt(N), rest 0
  const double expected_c0 = std::log(1e-10) * std::sqrt(40.0);
  for (int f = 0; f < m.frame_count; ++f) {
    CHECK(m.at(f, 0) == doctest::Approx(expected_c0).epsilon(1e-5));
    for (int k = 1; k < m.coeff_count; ++k) {
      CHECK(std::abs(m.at(f, k)) < 1e-6);
    }
  }
}

TEST_CASE("output is finite for extreme inputs") {
  AudioClip loud = tt::make_sine(3000.0, 1.0);
  MfccMatrix m = compute_mfcc(bandpass_filter(loud));
  for (float v : m.values) CHECK(std::isfinite(v));
}

TEST_CASE("frame i covers samples [160*i, 160*i + 480)") {
  // a burst in samples [8000, 8480) touches exactly frames 48..52
  AudioClip zero;
  zero.samples.assign(16000, 0.0f);
  AudioClip burst = zero;
  for (int i = 8000; i < 8480; ++i) burst.samples[i] = 0.5f;

  MfccMatrix quiet = compute_mfcc(zero);
  MfccMatrix loud = compute_mfcc(burst);
  for (int f = 0; f < 98; ++f) {
    bool differs = false;
    for (int k = 0; k < 40; ++k) {
      if (loud.at(f, k) != quiet.at(f, k)) differs = true;
    }
    const bool expect_differs = f >= 48 && f <= 52;
    CHECK(differs == expect_differs);
  }
}

TEST_CASE("mfcc is bit-deterministic") {
  AudioClip clip = tt::make_noise(11);
  MfccMatrix a = compute_mfcc(clip);
  MfccMatrix b = compute_mfcc(clip);
  CHECK(std::memcmp(a.values.data(), b.values.data(),
                    a.values.size() * sizeof(float)) == 0);
}

TEST_CASE("mel filters are non-empty and overlap at most to 1") {
  const auto bank = make_mel_filterbank(MfccConfig{}, 16000);
  REQUIRE(bank.size() == 40);
  for (const auto& row : bank) {
    double sum = 0.0;
    for (double v : row) sum += v;
    CHECK(sum > 0.0);
  }
  const size_t bins = bank[0].size();
  for (size_t k = 0; k < bins; ++k) {
    double col = 0.0;
    for (const auto& row : bank) col += row[k];
    CHECK(col <= 1.0 + 1e-9);
  }
  // nothing outside the 20 Hz .. 4 kHz band
  for (const auto& row : bank) {
    for (size_t k = 0; k < bins; ++k) {
      const double hz = k * 16000.0 / 512.0;
      if (hz < 20.0 || hz > 4000.0) CHECK(row[k] == 0.0);
    }
  }
}

// ------------------------------------------------------------ preprocess/io

TEST_CASE("preprocess composes loading, filtering and mfcc") {
  tt::TempDir dir("pre");
  save_wav(dir.file("word.wav"), tt::make_sine(700.0, 0.4));

  MfccMatrix direct =
      compute_mfcc(bandpass_filter(load_wav(dir.file("word.wav"))));
  MfccMatrix composed = preprocess(dir.file("word.wav"));
  CHECK(composed.frame_count == 98);
  CHECK(composed.coeff_count == 40);
  CHECK(std::memcmp(direct.values.data(), composed.values.data(),
                    direct.values.size() * sizeof(float)) == 0);
}

TEST_CASE("preprocess of a missing file fails") {
  CHECK_THROWS_AS(preprocess("/nonexistent/nope.wav"), IoError);
}

TEST_CASE("feature files round-trip bit-exactly") {
  tt::TempDir dir("esmf");
  MfccMatrix m = compute_mfcc(tt::make_noise(3));
  save_esmf(dir.file("m.esmf"), m);
  MfccMatrix back = load_esmf(dir.file("m.esmf"));
  CHECK(back.frame_count == m.frame_count);
  CHECK(back.coeff_count == m.coeff_count);
  CHECK(std::memcmp(back.values.data(), m.values.data(),
                    m.values.size() * sizeof(float)) == 0);
}

TEST_CASE("feature file header starts with the ESMF magic") {
  tt::TempDir dir("esmf_magic");
  MfccMatrix m;
  m.frame_count = 1;
  m.coeff_count = 2;
  m.values = {1.0f, 2.0f};
  save_esmf(dir.file("m.esmf"), m);

  std::ifstream in(dir.file("m.esmf"), std::ios::binary);
  char magic[4];
  in.read(magic, 4);
  CHECK(std::memcmp(magic, "ESMF", 4) == 0);

  std::ofstream(dir.file("junk.esmf")) << "not a matrix";
  CHECK_THROWS_AS(load_esmf(dir.file("junk.esmf")), ParseError);
}

}  // TEST_SUITE
