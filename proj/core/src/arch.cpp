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

#include "esn/arch.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "esn/errors.hpp"
#include "esn/random.hpp"

namespace esn {

namespace {

using nlohmann::json;

LayerSpec conv_row(int n, int64_t params) {
  LayerSpec row;
  row.kind = LayerKind::kConv;
  row.m = 3;
  row.r = 3;
  row.n = n;
  row.expected_params = params;
  return row;
}

LayerSpec pool_row(int pool_h = 0, int pool_w = 0) {
  LayerSpec row;
  row.kind = LayerKind::kAvgPool;
  row.pool_h = pool_h;
  row.pool_w = pool_w;
  return row;
}

LayerSpec dense_row(int n, int64_t params) {
  LayerSpec row;
  row.kind = LayerKind::kDense;
  row.n = n;
  row.expected_params = params;
  return row;
}

LayerSpec softmax_row() {
  LayerSpec row;
  row.kind = LayerKind::kSoftmax;
  return row;
}

struct BottleneckDef {
  int narrow;
  int64_t params;  // each conv of the pair has the same weight count
};

// The four published variants. Reference per-row counts are stored
// verbatim so the verifier checks our arithmetic against them instead of
// deriving both sides from the same formula.
ArchitectureSpec make_variant(const std::string& name, int stem,
                              int64_t stem_params, bool pool_after_stem,
                              const std::vector<BottleneckDef>& pairs,
                              std::optional<int64_t> tail_params) {
  ArchitectureSpec spec;
  spec.name = name;
  spec.layers.push_back(conv_row(stem, stem_params));
  if (pool_after_stem) spec.layers.push_back(pool_row(4, 3));
  for (const auto& p : pairs) {
    spec.layers.push_back(conv_row(p.narrow, p.params));
    spec.layers.push_back(conv_row(stem, p.params));
  }
  if (tail_params) spec.layers.push_back(conv_row(45, *tail_params));
  spec.layers.push_back(pool_row());
  spec.layers.push_back(dense_row(12, 540));
  spec.layers.push_back(softmax_row());
  return spec;
}

}  // namespace

bool is_builtin(const std::string& name) {
  if (name.size() == 1) {
    const char c = static_cast<char>(std::toupper(name[0]));
    return c >= 'A' && c <= 'D';
  }
  return name == "EdgeSpeechNet-A" || name == "EdgeSpeechNet-B" ||
         name == "EdgeSpeechNet-C" || name == "EdgeSpeechNet-D";
}

ArchitectureSpec builtin_spec(const std::string& name) {
  char variant = 0;
  if (name.size() == 1) {
    variant = static_cast<char>(std::toupper(name[0]));
  } else if (name.rfind("EdgeSpeechNet-", 0) == 0 && name.size() == 15) {
    variant = name[14];
  }
  switch (variant) {
    case 'A':
      return make_variant("EdgeSpeechNet-A", 39, 351, false,
                          {{20, 7020},
                           {15, 5265},
                           {25, 8775},
                           {22, 7722},
                           {22, 7722},
                           {25, 8775}},
                          15795);
    case 'B':
      return make_variant("EdgeSpeechNet-B", 30, 270, false,
                          {{8, 2160},
                           {9, 2430},
                           {11, 2970},
                           {10, 2700},
                           {8, 2160},
                           {11, 2970}},
                          12150);
    case 'C':
      return make_variant("EdgeSpeechNet-C", 24, 216, false,
                          {{6, 1296},
                           {9, 1944},
                           {12, 2592},
                           {6, 1296},
                           {5, 1080},
                           {6, 1296},
                           {2, 432}},
                          9720);
    case 'D':
      return make_variant("EdgeSpeechNet-D", 45, 405, true,
                          {{30, 12150}, {33, 13365}, {35, 14175}},
                          std::nullopt);
    default:
      throw UnknownArchitecture("unknown architecture '" + name +
                                "' (expected A, B, C or D)");
  }
}

ResidualTopology infer_residual_topology(const ArchitectureSpec& spec) {
  std::vector<int> convs;
  for (size_t i = 0; i < spec.layers.size(); ++i) {
    if (spec.layers[i].kind == LayerKind::kConv) {
      convs.push_back(static_cast<int>(i));
    }
  }
  if (convs.empty() || convs[0] != 0) {
    throw MalformedSpec("first layer must be a conv");
  }

  ResidualTopology topo;
  topo.stem = convs[0];
  const int wide = spec.layers[topo.stem].n;

  size_t i = 1;
  while (i + 1 < convs.size()) {
    const int narrow_idx = convs[i];
    const int wide_idx = convs[i + 1];
    if (spec.layers[narrow_idx].n >= wide ||
        spec.layers[wide_idx].n != wide) {
      break;
    }
    if (wide_idx != narrow_idx + 1) {
      throw MalformedSpec(
          "residual pair interrupted by a non-conv layer at index " +
          std::to_string(narrow_idx + 1));
    }
    topo.blocks.emplace_back(narrow_idx, wide_idx);
    i += 2;
  }
  for (; i < convs.size(); ++i) {
    // A leftover conv below the wide width cannot close into a block.
    if (spec.layers[convs[i]].n < wide && i + 1 < convs.size()) {
      throw MalformedSpec(
          "conv sequence fits no wide-narrow-wide grouping at layer " +
          std::to_string(convs[i]));
    }
    topo.tail.push_back(convs[i]);
  }
  return topo;
}

void validate_spec(const ArchitectureSpec& spec) {
  if (spec.input[0] < 1 || spec.input[1] < 1 || spec.input[2] < 1) {
    throw MalformedSpec("input shape must be positive");
  }
  if (spec.layers.size() < 3) {
    throw MalformedSpec("spec needs at least conv, dense and softmax layers");
  }
  if (spec.layers.front().kind != LayerKind::kConv) {
    throw MalformedSpec("first layer must be a conv");
  }
  const size_t n = spec.layers.size();
  if (spec.layers[n - 2].kind != LayerKind::kDense ||
      spec.layers[n - 1].kind != LayerKind::kSoftmax) {
    throw MalformedSpec("last two layers must be dense then softmax");
  }
  if (spec.layers[n - 3].kind != LayerKind::kAvgPool ||
      spec.layers[n - 3].pool_h != 0 || spec.layers[n - 3].pool_w != 0) {
    throw MalformedSpec("dense layer must be fed by a global avg-pool");
  }
  for (size_t i = 0; i < n; ++i) {
    const LayerSpec& l = spec.layers[i];
    switch (l.kind) {
      case LayerKind::kConv:
        if (l.m < 1 || l.r < 1 || l.n < 1) {
          throw MalformedSpec("conv row " + std::to_string(i) +
                              " has non-positive dimensions");
        }
        break;
      case LayerKind::kDense:
        if (i != n - 2) {
          throw MalformedSpec("dense must be the second-to-last layer");
        }
        if (l.n < 1) throw MalformedSpec("dense output must be positive");
        break;
      case LayerKind::kSoftmax:
        if (i != n - 1) throw MalformedSpec("softmax must be the last layer");
        break;
      case LayerKind::kAvgPool:
        if ((l.pool_h == 0) != (l.pool_w == 0)) {
          throw MalformedSpec("avg-pool window must be fully given or global");
        }
        if (l.pool_h < 0 || l.pool_w < 0) {
          throw MalformedSpec("avg-pool window must be non-negative");
        }
        break;
    }
  }
  infer_residual_topology(spec);  // must group cleanly
}

Network build_network(const ArchitectureSpec& spec, uint64_t seed) {
  validate_spec(spec);
  const ResidualTopology topo = infer_residual_topology(spec);

  Network net;
  net.name = spec.name;
  net.input_shape = spec.input;
  net.layers.reserve(spec.layers.size());

  Prng rng(seed);
  auto he_fill = [&rng](Tensor* t, int fan_in) {
    const double std_dev = std::sqrt(2.0 / fan_in);
    for (float& v : t->data) {
      v = static_cast<float>(rng.gaussian() * std_dev);
    }
  };

  int channels = spec.input[0];
  for (const LayerSpec& row : spec.layers) {
    NetworkLayer layer;
    switch (row.kind) {
      case LayerKind::kConv: {
        layer.kind = NetworkLayer::Kind::kConvBn;
        layer.conv = make_conv(row.m, row.r, channels, row.n);
        he_fill(&layer.conv.weights, row.m * row.r * channels);
        layer.bn = make_batchnorm(row.n);
        channels = row.n;
        break;
      }
      case LayerKind::kAvgPool:
        if (row.pool_h == 0) {
          layer.kind = NetworkLayer::Kind::kGlobalAvgPool;
        } else {
          layer.kind = NetworkLayer::Kind::kAvgPool;
          layer.pool_h = row.pool_h;
          layer.pool_w = row.pool_w;
        }
        break;
      case LayerKind::kDense: {
        layer.kind = NetworkLayer::Kind::kDense;
        layer.dense = make_dense(channels, row.n);
        he_fill(&layer.dense.weights, channels);
        break;
      }
      case LayerKind::kSoftmax:
        layer.kind = NetworkLayer::Kind::kSoftmax;
        break;
    }
    net.layers.push_back(std::move(layer));
  }

  for (const auto& [narrow_idx, wide_idx] : topo.blocks) {
    net.layers[static_cast<size_t>(wide_idx)].skip_source = narrow_idx;
  }
  return net;
}

ParamReport verify_params(const ArchitectureSpec& spec) {
  ParamReport report;
  int channels = spec.input[0];
  bool every_feature_row_has_expected = true;

  for (size_t i = 0; i < spec.layers.size(); ++i) {
    const LayerSpec& l = spec.layers[i];
    ParamRow row;
    row.layer_index = static_cast<int>(i);
    row.kind = l.kind;
    row.m = l.m;
    row.r = l.r;
    row.n = l.n;
    switch (l.kind) {
      case LayerKind::kConv:
        row.computed = static_cast<int64_t>(l.m) * l.r * channels * l.n;
        channels = l.n;
        break;
      case LayerKind::kDense:
        row.computed = static_cast<int64_t>(channels) * l.n;
        break;
      default:
        row.computed = 0;
        break;
    }
    if (l.kind == LayerKind::kConv || l.kind == LayerKind::kDense) {
      row.expected = l.expected_params;
      if (!row.expected) every_feature_row_has_expected = false;
    }
    row.match = !row.expected || row.computed == *row.expected;
    report.all_match = report.all_match && row.match;
    report.total_computed += row.computed;
    report.rows.push_back(row);
  }

  if (every_feature_row_has_expected) {
    int64_t total = 0;
    for (const auto& row : report.rows) {
      if (row.expected) total += *row.expected;
    }
    report.total_expected = total;
    report.all_match =
        report.all_match && report.total_computed == total;
  }
  return report;
}

namespace {

const char* kind_name(LayerKind kind) {
  switch (kind) {
    case LayerKind::kConv:
      return "conv";
    case LayerKind::kAvgPool:
      return "avg-pool";
    case LayerKind::kDense:
      return "dense";
    case LayerKind::kSoftmax:
      return "softmax";
  }
  return "?";
}

LayerKind kind_from_name(const std::string& s) {
  if (s == "conv") return LayerKind::kConv;
  if (s == "avg-pool") return LayerKind::kAvgPool;
  if (s == "dense") return LayerKind::kDense;
  if (s == "softmax") return LayerKind::kSoftmax;
  throw ParseError("unknown layer kind '" + s + "'");
}

void reject_unknown_fields(const json& obj,
                           const std::vector<std::string>& allowed,
                           const char* where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const auto& name : allowed) {
      if (it.key() == name) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw ParseError(std::string("unknown field '") + it.key() + "' in " +
                       where);
    }
  }
}

}  // namespace

std::string serialize_spec(const ArchitectureSpec& spec) {
  json j;
  j["name"] = spec.name;
  j["input"] = {spec.input[0], spec.input[1], spec.input[2]};
  j["layers"] = json::array();
  for (const LayerSpec& l : spec.layers) {
    json row;
    row["kind"] = kind_name(l.kind);
    if (l.kind == LayerKind::kConv) {
      row["m"] = l.m;
      row["r"] = l.r;
      row["n"] = l.n;
    } else if (l.kind == LayerKind::kDense) {
      row["n"] = l.n;
    } else if (l.kind == LayerKind::kAvgPool && l.pool_h != 0) {
      row["pool"] = {l.pool_h, l.pool_w};
    }
    if (l.expected_params) row["params"] = *l.expected_params;
    j["layers"].push_back(std::move(row));
  }
  return j.dump(2);
}

ArchitectureSpec parse_spec(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  try {
    if (!j.is_object()) throw ParseError("spec must be a JSON object");
    reject_unknown_fields(j, {"name", "input", "layers"}, "spec");

    ArchitectureSpec spec;
    spec.name = j.at("name").get<std::string>();
    const auto& input = j.at("input");
    if (!input.is_array() || input.size() != 3) {
      throw ParseError("input must be [channels, frames, coeffs]");
    }
    for (size_t i = 0; i < 3; ++i) spec.input[i] = input[i].get<int>();

    for (const auto& row : j.at("layers")) {
      if (!row.is_object()) throw ParseError("layer row must be an object");
      reject_unknown_fields(row, {"kind", "m", "r", "n", "pool", "params"},
                            "layer row");
      LayerSpec l;
      l.kind = kind_from_name(row.at("kind").get<std::string>());
      switch (l.kind) {
        case LayerKind::kConv:
          l.m = row.at("m").get<int>();
          l.r = row.at("r").get<int>();
          l.n = row.at("n").get<int>();
          break;
        case LayerKind::kDense:
          l.n = row.at("n").get<int>();
          break;
        case LayerKind::kAvgPool:
          if (row.contains("pool")) {
            const auto& p = row.at("pool");
            if (!p.is_array() || p.size() != 2) {
              throw ParseError("pool must be [h, w]");
            }
            l.pool_h = p[0].get<int>();
            l.pool_w = p[1].get<int>();
          }
          break;
        case LayerKind::kSoftmax:
          break;
      }
      if (row.contains("params")) {
        l.expected_params = row.at("params").get<int64_t>();
      }
      spec.layers.push_back(std::move(l));
    }
    return spec;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad spec: ") + e.what());
  }
}

ArchitectureSpec load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_spec(buf.str());
}

void save_spec_file(const std::string& path, const ArchitectureSpec& spec) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << serialize_spec(spec) << "\n";
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace esn
