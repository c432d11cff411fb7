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

#include "esn/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>

#include "esn/errors.hpp"
#include "esn/random.hpp"
#include "esn/threading.hpp"

namespace fs = std::filesystem;

namespace esn {

LabelMap LabelMap::standard() {
  return LabelMap{{"yes", "no", "up", "down", "left", "right", "on", "off",
                   "stop", "go", "_silence_", "_unknown_"}};
}

int LabelMap::index_of(std::string_view name) const {
  for (size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return static_cast<int>(i);
  }
  return -1;
}

uint32_t fnv1a32(std::string_view s) {
  uint32_t h = 2166136261u;
  for (unsigned char c : s) {
    h ^= c;
    h *= 16777619u;
  }
  return h;
}

Split assign_split(const std::string& base_filename) {
  const uint32_t bucket = fnv1a32(base_filename) % 100;
  if (bucket < 80) return Split::kTrain;
  if (bucket < 90) return Split::kVal;
  return Split::kTest;
}

Tensor mfcc_to_tensor(const MfccMatrix& m) {
  Tensor t({1, m.frame_count, m.coeff_count});
  t.data = m.values;
  return t;
}

namespace {

constexpr const char* kNoiseDir = "_background_noise_";

struct PendingFile {
  std::string path;
  std::string base;   // filename as on disk
  int label;          // index into the label map
  bool unknown;
};

AudioClip crop_second(const std::vector<float>& samples, size_t offset) {
  AudioClip clip;
  clip.samples.assign(kClipSamples, 0.0f);
  const size_t n =
      std::min<size_t>(kClipSamples, samples.size() - offset);
  std::copy(samples.begin() + offset, samples.begin() + offset + n,
            clip.samples.begin());
  return clip;
}

}  // namespace

IngestResult ingest_speech_commands(const std::string& root_dir,
                                    const LabelMap& labels,
                                    const MfccConfig& cfg) {
  if (!fs::is_directory(root_dir)) {
    throw MissingDirectory("dataset directory not found: " + root_dir);
  }

  std::vector<PendingFile> files;
  for (const auto& dir : fs::directory_iterator(root_dir)) {
    if (!dir.is_directory()) continue;
    const std::string word = dir.path().filename().string();
    if (word == kNoiseDir) continue;
    int label = labels.index_of(word);
    const bool unknown = label < 0;
    if (unknown) label = labels.unknown_index();
    for (const auto& entry : fs::directory_iterator(dir.path())) {
      if (!entry.is_regular_file()) continue;
      if (entry.path().extension() != ".wav") continue;
      files.push_back({entry.path().string(),
                       entry.path().filename().string(), label, unknown});
    }
  }
  // directory iteration order is unspecified; sort for determinism
  std::sort(files.begin(), files.end(),
            [](const PendingFile& a, const PendingFile& b) {
              return a.path < b.path;
            });
  if (files.empty()) {
    throw EmptyDataset("no .wav files under " + root_dir);
  }

  // Partition per split; count target words, then keep a deterministic
  // ~10% worth of unknowns (ordered by name hash so the choice is stable
  // under partial corpora).
  struct SplitBuild {
    std::vector<const PendingFile*> keep;
    std::vector<const PendingFile*> unknowns;
    size_t target_count = 0;
  };
  std::map<Split, SplitBuild> builds;
  for (const auto& f : files) {
    SplitBuild& b = builds[assign_split(f.base)];
    if (f.unknown) {
      b.unknowns.push_back(&f);
    } else {
      b.keep.push_back(&f);
      ++b.target_count;
    }
  }

  size_t silence_counts[3] = {0, 0, 0};
  for (auto& [split, b] : builds) {
    std::sort(b.unknowns.begin(), b.unknowns.end(),
              [](const PendingFile* a, const PendingFile* b2) {
                const uint32_t ha = fnv1a32(a->base);
                const uint32_t hb = fnv1a32(b2->base);
                return ha != hb ? ha < hb : a->base < b2->base;
              });
    size_t quota = (b.target_count + 9) / 10;  // ~1/10, at least 1
    if (b.target_count == 0) quota = 0;
    quota = std::min(quota, b.unknowns.size());
    for (size_t i = 0; i < quota; ++i) b.keep.push_back(b.unknowns[i]);
    silence_counts[static_cast<int>(split)] = quota;
    // mixed insertions above; restore name order
    std::sort(b.keep.begin(), b.keep.end(),
              [](const PendingFile* a, const PendingFile* b2) {
                return a->path < b2->path;
              });
  }

  IngestResult result;
  result.train.split = "train";
  result.val.split = "val";
  result.test.split = "test";

  auto dataset_of = [&result](Split s) -> Dataset& {
    switch (s) {
      case Split::kTrain:
        return result.train;
      case Split::kVal:
        return result.val;
      default:
        return result.test;
    }
  };

  for (auto& [split, b] : builds) {
    Dataset& ds = dataset_of(split);
    const size_t base_index = ds.examples.size();
    ds.examples.resize(base_index + b.keep.size());
    // preprocessing dominates; parallel over files, slotted by index
    parallel_for(static_cast<int64_t>(b.keep.size()), [&](int64_t i) {
      const PendingFile& f = *b.keep[static_cast<size_t>(i)];
      Example ex;
      ex.features = compute_mfcc(bandpass_filter(load_wav(f.path)), cfg);
      ex.label = f.label;
      ex.source = f.base;
      ds.examples[base_index + static_cast<size_t>(i)] = std::move(ex);
    });
  }

  // Silence: one-second crops of the background noise recordings, count
  // matched to each split's unknown quota. Offsets come from a fixed-seed
  // PRNG so re-ingestion reproduces the same crops.
  std::vector<std::string> noise_files;
  const fs::path noise_dir = fs::path(root_dir) / kNoiseDir;
  if (fs::is_directory(noise_dir)) {
    for (const auto& entry : fs::directory_iterator(noise_dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".wav") {
        noise_files.push_back(entry.path().string());
      }
    }
    std::sort(noise_files.begin(), noise_files.end());
  }
  if (!noise_files.empty()) {
    std::vector<std::vector<float>> noise;
    noise.reserve(noise_files.size());
    for (const auto& p : noise_files) noise.push_back(load_wav_samples(p));

    const Split splits[3] = {Split::kTrain, Split::kVal, Split::kTest};
    for (int si = 0; si < 3; ++si) {
      Dataset& ds = dataset_of(splits[si]);
      const size_t count = silence_counts[si];
      Prng rng(derive_seed(0x51f3ce, static_cast<uint64_t>(si)));
      for (size_t i = 0; i < count; ++i) {
        const size_t which = rng.uniform_int(
            static_cast<uint32_t>(noise.size()));
        const auto& samples = noise[which];
        size_t offset = 0;
        if (samples.size() > kClipSamples) {
          offset = rng.uniform_int(
              static_cast<uint32_t>(samples.size() - kClipSamples));
        }
        Example ex;
        ex.features =
            compute_mfcc(bandpass_filter(crop_second(samples, offset)), cfg);
        ex.label = labels.silence_index();
        ex.source = "_silence_" + std::to_string(si) + "_" +
                    std::to_string(i);
        ds.examples.push_back(std::move(ex));
      }
    }
  }

  return result;
}

}  // namespace esn
