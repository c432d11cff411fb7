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

#include <benchmark/benchmark.h>

#include "esn/arch.hpp"
#include "esn/explore.hpp"
#include "esn/fft.hpp"
#include "esn/mfcc.hpp"
#include "esn/random.hpp"

namespace {

esn::AudioClip noise_clip(uint64_t seed) {
  esn::Prng rng(seed);
  esn::AudioClip clip;
  clip.samples.resize(esn::kClipSamples);
  for (float& v : clip.samples) {
    v = static_cast<float>(0.4 * (2.0 * rng.uniform() - 1.0));
  }
  return clip;
}

esn::Tensor random_input(uint64_t seed) {
  esn::Prng rng(seed);
  esn::Tensor t({1, 98, 40});
  for (float& v : t.data) {
    v = static_cast<float>(2.0 * rng.uniform() - 1.0);
  }
  return t;
}

void BM_Fft512(benchmark::State& state) {
  esn::Prng rng(1);
  std::vector<double> frame(480);
  for (double& v : frame) v = 2.0 * rng.uniform() - 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(esn::power_spectrum(frame, 512));
  }
}
BENCHMARK(BM_Fft512);

void BM_Bandpass(benchmark::State& state) {
  const esn::AudioClip clip = noise_clip(2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(esn::bandpass_filter(clip));
  }
}
BENCHMARK(BM_Bandpass);

void BM_Mfcc(benchmark::State& state) {
  const esn::AudioClip clip = esn::bandpass_filter(noise_clip(3));
  for (auto _ : state) {
    benchmark::DoNotOptimize(esn::compute_mfcc(clip));
  }
}
BENCHMARK(BM_Mfcc);

void BM_Conv3x3(benchmark::State& state) {
  const int channels = static_cast<int>(state.range(0));
  esn::ConvLayer layer = esn::make_conv(3, 3, channels, channels);
  esn::Prng rng(4);
  for (float& v : layer.weights.data) {
    v = static_cast<float>(0.1 * (2.0 * rng.uniform() - 1.0));
  }
  esn::Tensor input({channels, 98, 40});
  for (float& v : input.data) {
    v = static_cast<float>(2.0 * rng.uniform() - 1.0);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(esn::conv2d_forward(input, layer));
  }
  state.SetItemsProcessed(state.iterations() * 9LL * channels * channels *
                          98 * 40);
}
BENCHMARK(BM_Conv3x3)->Arg(24)->Arg(39)->Arg(45);

void forward_variant(benchmark::State& state, const char* name, bool fold) {
  esn::Network net = esn::build_network(esn::builtin_spec(name), 0);
  if (fold) net = esn::fold_network(net);
  const esn::Tensor input = random_input(5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(net.forward(input, esn::Mode::kInfer));
  }
  const esn::ArchitectureSpec spec = esn::builtin_spec(name);
  state.SetItemsProcessed(state.iterations() *
                          esn::estimate_macs(spec, spec.input));
}

void BM_ForwardA(benchmark::State& state) { forward_variant(state, "A", false); }
void BM_ForwardB(benchmark::State& state) { forward_variant(state, "B", false); }
void BM_ForwardC(benchmark::State& state) { forward_variant(state, "C", false); }
void BM_ForwardD(benchmark::State& state) { forward_variant(state, "D", false); }
void BM_ForwardAFolded(benchmark::State& state) {
  forward_variant(state, "A", true);
}
BENCHMARK(BM_ForwardA);
BENCHMARK(BM_ForwardB);
BENCHMARK(BM_ForwardC);
BENCHMARK(BM_ForwardD);
BENCHMARK(BM_ForwardAFolded);

}  // namespace

int main(int argc, char** argv) {
  benchmark::Initialize(&argc, argv);
  benchmark::RunSpecifiedBenchmarks();
  return 0;
}
