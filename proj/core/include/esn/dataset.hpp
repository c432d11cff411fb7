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

#ifndef ESN_DATASET_HPP_
#define ESN_DATASET_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "esn/mfcc.hpp"
#include "esn/tensor.hpp"

namespace esn {

// The fixed 12-way task: ten target words plus silence and unknown.
struct LabelMap {
  std::vector<std::string> names;

  static LabelMap standard();
  int index_of(std::string_view name) const;  // -1 when absent
  int num_classes() const { return static_cast<int>(names.size()); }
  int silence_index() const { return num_classes() - 2; }
  int unknown_index() const { return num_classes() - 1; }
};

struct Example {
  MfccMatrix features;
  int label = -1;
  std::string source;  // base filename, or a synthetic id for silence
};

struct Dataset {
  std::vector<Example> examples;
  std::string split;
};

enum class Split { kTrain, kVal, kTest };

uint32_t fnv1a32(std::string_view s);

// The documented split rule: FNV-1a of the base filename (as it appears on
// disk, extension included) modulo 100; < 80 train, < 90 val, else test.
// A pure function of the name, so files never migrate between splits.
Split assign_split(const std::string& base_filename);

struct IngestResult {
  Dataset train, val, test;
};

// Scans <root>/<word>/<clip>.wav. Words outside the label map become
// _unknown_ examples, deterministically downsampled to about a tenth of
// each split's target-word count; _silence_ examples are one-second crops
// of <root>/_background_noise_/*.wav, matched in count to the unknowns.
// Every clip runs through the band-pass + MFCC frontend.
IngestResult ingest_speech_commands(const std::string& root_dir,
                                    const LabelMap& labels,
                                    const MfccConfig& cfg = {});

// Feature matrix as network input, [1, frames, coeffs].
Tensor mfcc_to_tensor(const MfccMatrix& m);

}  // namespace esn

#endif  // ESN_DATASET_HPP_
