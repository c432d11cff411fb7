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
// esn: one binary for the whole pipeline.
//   preprocess   wav -> feature matrix file
//   verify-arch  parameter table against reference counts
//   train        Speech Commands directory -> checkpoint
//   eval         checkpoint accuracy on a split
//   predict      single-clip keyword prediction
//   explore      machine-driven architecture search
//   bench        single-clip forward latency
//
// Exit codes: 0 success, 1 verification/accuracy failure, 2 usage error,
// 3 I/O or format error. ESN_THREADS caps worker parallelism.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "esn/arch.hpp"
#include "esn/dataset.hpp"
#include "esn/errors.hpp"
#include "esn/explore.hpp"
#include "esn/mfcc.hpp"
#include "esn/random.hpp"
#include "esn/train.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

// Every run prints the resolved configuration once, for reproducibility.
void print_config_header(const std::string& cmd, const json& config,
                         bool json_mode) {
  if (json_mode) return;  // embedded in the JSON document instead
  std::cout << "# esn " << cmd;
  for (auto it = config.begin(); it != config.end(); ++it) {
    std::cout << " " << it.key() << "=" << it.value().dump();
  }
  std::cout << "\n";
}

esn::ArchitectureSpec resolve_spec(const std::string& arch,
                                   const std::string& spec_path) {
  if (!arch.empty()) return esn::builtin_spec(arch);
  return esn::load_spec_file(spec_path);
}

const char* kind_label(esn::LayerKind kind) {
  switch (kind) {
    case esn::LayerKind::kConv:
      return "conv";
    case esn::LayerKind::kAvgPool:
      return "avg-pool";
    case esn::LayerKind::kDense:
      return "dense";
    case esn::LayerKind::kSoftmax:
      return "softmax";
  }
  return "?";
}

// ---------------------------------------------------------------- commands

int cmd_preprocess(const std::string& input, std::string output,
                   bool json_mode) {
  if (output.empty()) {
    output = fs::path(input).replace_extension(".esmf").string();
  }
  print_config_header("preprocess", {{"input", input}, {"output", output}},
                      json_mode);

  const esn::MfccMatrix m = esn::preprocess(input);
  esn::save_esmf(output, m);

  if (json_mode) {
    json doc;
    doc["config"] = {{"input", input}, {"output", output}};
    doc["frames"] = m.frame_count;
    doc["coeffs"] = m.coeff_count;
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << "wrote " << output << " (" << m.frame_count << "x"
              << m.coeff_count << ")\n";
  }
  return kExitOk;
}

int cmd_verify_arch(const std::string& arch, const std::string& spec_path,
                    bool json_mode) {
  const esn::ArchitectureSpec spec = resolve_spec(arch, spec_path);
  const esn::ParamReport report = esn::verify_params(spec);
  print_config_header("verify-arch", {{"name", spec.name}}, json_mode);

  if (json_mode) {
    json doc;
    doc["config"] = {{"name", spec.name}};
    doc["rows"] = json::array();
    for (const auto& row : report.rows) {
      json r;
      r["type"] = kind_label(row.kind);
      if (row.kind == esn::LayerKind::kConv) {
        r["m"] = row.m;
        r["r"] = row.r;
      }
      if (row.kind == esn::LayerKind::kConv ||
          row.kind == esn::LayerKind::kDense) {
        r["n"] = row.n;
        r["params"] = row.computed;
        if (row.expected) r["expected"] = *row.expected;
        r["match"] = row.match;
      }
      doc["rows"].push_back(std::move(r));
    }
    doc["total"] = report.total_computed;
    if (report.total_expected) doc["expected_total"] = *report.total_expected;
    doc["pass"] = report.all_match;
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << spec.name << "  input " << spec.input[0] << "x"
              << spec.input[1] << "x" << spec.input[2] << "\n";
    std::printf("%-10s %3s %3s %5s %10s %10s %s\n", "type", "m", "r", "n",
                "params", "expected", "");
    for (const auto& row : report.rows) {
      const bool feature = row.kind == esn::LayerKind::kConv ||
                           row.kind == esn::LayerKind::kDense;
      if (row.kind == esn::LayerKind::kConv) {
        std::printf("%-10s %3d %3d %5d ", "conv", row.m, row.r, row.n);
      } else if (row.kind == esn::LayerKind::kDense) {
        std::printf("%-10s %3s %3s %5d ", "dense", "-", "-", row.n);
      } else {
        std::printf("%-10s %3s %3s %5s ", kind_label(row.kind), "-", "-",
                    "-");
      }
      if (feature) {
        std::printf("%10lld ", static_cast<long long>(row.computed));
        if (row.expected) {
          std::printf("%10lld %s\n", static_cast<long long>(*row.expected),
                      row.match ? "" : "MISMATCH");
        } else {
          std::printf("%10s\n", "-");
        }
      } else {
        std::printf("%10s %10s\n", "-", "-");
      }
    }
    std::printf("%-10s %3s %3s %5s %10lld %10s\n", "total", "-", "-", "-",
                static_cast<long long>(report.total_computed),
                report.total_expected
                    ? std::to_string(*report.total_expected).c_str()
                    : "-");
    std::cout << (report.all_match ? "PASS" : "FAIL") << "\n";
  }
  return report.all_match ? kExitOk : kExitVerifyFailed;
}

int cmd_train(const std::string& data_dir, const std::string& arch,
              const std::string& spec_path, const std::string& out_prefix,
              esn::TrainConfig cfg, bool json_mode) {
  const esn::ArchitectureSpec spec = resolve_spec(arch, spec_path);
  json config = {{"data_dir", data_dir}, {"name", spec.name},
                 {"epochs", cfg.epochs}, {"batch_size", cfg.batch_size},
                 {"lr", cfg.learning_rate}, {"momentum", cfg.momentum},
                 {"weight_decay", cfg.weight_decay}, {"seed", cfg.seed},
                 {"out", out_prefix}};
  print_config_header("train", config, json_mode);

  const esn::LabelMap labels = esn::LabelMap::standard();
  const esn::IngestResult data = esn::ingest_speech_commands(data_dir, labels);
  if (!json_mode) {
    std::cout << "ingested train/val/test = " << data.train.examples.size()
              << "/" << data.val.examples.size() << "/"
              << data.test.examples.size() << "\n";
  }

  esn::Network net = esn::build_network(spec, cfg.seed);
  const esn::History history = esn::train(&net, data.train, data.val, cfg);
  if (!json_mode) {
    for (const auto& e : history) {
      std::printf("epoch %3d  lr %.4f  loss %.4f  val %.4f\n", e.epoch,
                  e.learning_rate, e.train_loss, e.val_accuracy);
    }
  }
  const double val_acc =
      history.empty() ? -1.0 : history.back().val_accuracy;
  esn::save_checkpoint(out_prefix, net, spec,
                       history.empty() ? 0 : history.back().epoch, val_acc,
                       cfg);

  if (json_mode) {
    json doc;
    doc["config"] = config;
    doc["history"] = json::array();
    for (const auto& e : history) {
      doc["history"].push_back({{"epoch", e.epoch},
                                {"lr", e.learning_rate},
                                {"train_loss", e.train_loss},
                                {"val_accuracy", e.val_accuracy}});
    }
    doc["checkpoint"] = out_prefix + ".esnw";
    doc["val_accuracy"] = val_acc;
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << "wrote " << out_prefix << ".esnw and " << out_prefix
              << ".json\n";
  }
  return kExitOk;
}

int cmd_eval(const std::string& weights, const std::string& spec_path,
             const std::string& arch, const std::string& data_dir,
             const std::string& split, bool json_mode) {
  const esn::ArchitectureSpec spec = resolve_spec(arch, spec_path);
  json config = {{"weights", weights}, {"name", spec.name},
                 {"data_dir", data_dir}, {"split", split}};
  print_config_header("eval", config, json_mode);

  esn::Network net = esn::build_network(spec, 0);
  esn::load_network_weights(weights, &net);

  const esn::LabelMap labels = esn::LabelMap::standard();
  const esn::IngestResult data = esn::ingest_speech_commands(data_dir, labels);
  const esn::Dataset& ds = split == "train" ? data.train
                           : split == "val" ? data.val
                                            : data.test;
  const double acc = esn::evaluate(&net, ds);

  if (json_mode) {
    json doc;
    doc["config"] = config;
    doc["examples"] = ds.examples.size();
    doc["accuracy"] = acc;
    std::cout << doc.dump(2) << "\n";
  } else {
    std::printf("accuracy %.4f over %zu examples\n", acc,
                ds.examples.size());
  }
  return kExitOk;
}

int cmd_predict(const std::string& weights, const std::string& spec_path,
                const std::string& arch, const std::string& input,
                bool json_mode) {
  const esn::ArchitectureSpec spec = resolve_spec(arch, spec_path);
  json config = {{"weights", weights}, {"name", spec.name},
                 {"input", input}};
  print_config_header("predict", config, json_mode);

  esn::Network net = esn::build_network(spec, 0);
  esn::load_network_weights(weights, &net);

  const esn::LabelMap labels = esn::LabelMap::standard();
  const esn::MfccMatrix features = esn::preprocess(input);
  const esn::Prediction p = esn::predict(&net, features, labels);

  if (json_mode) {
    json doc;
    doc["config"] = config;
    doc["label"] = p.label;
    doc["probs"] = json::object();
    for (size_t i = 0; i < labels.names.size(); ++i) {
      doc["probs"][labels.names[i]] = p.probs[i];
    }
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << p.label << "\n";
    for (size_t i = 0; i < labels.names.size(); ++i) {
      std::printf("  %-10s %.4f\n", labels.names[i].c_str(), p.probs[i]);
    }
  }
  return kExitOk;
}

int cmd_explore(const std::string& prototype_path, double min_val_acc,
                int generations, int per_gen, uint64_t seed,
                const std::string& out_dir, const std::string& data_dir,
                int epochs_per_candidate, int64_t max_params,
                int64_t max_macs, bool json_mode) {
  const esn::ArchitectureSpec prototype =
      esn::load_spec_file(prototype_path);
  json config = {{"prototype", prototype.name},
                 {"min_val_acc", min_val_acc},
                 {"generations", generations},
                 {"per_gen", per_gen},
                 {"seed", seed},
                 {"out", out_dir},
                 {"data_dir", data_dir.empty() ? "<synthetic>" : data_dir}};
  print_config_header("explore", config, json_mode);

  esn::Requirements reqs;
  reqs.min_val_accuracy = min_val_acc;
  if (max_params > 0) reqs.max_params = max_params;
  if (max_macs > 0) reqs.max_macs = max_macs;

  esn::ExploreBudget budget;
  budget.generations = generations;
  budget.candidates_per_gen = per_gen;

  esn::IngestResult data;
  esn::TrainConfig recipe;
  esn::Evaluator evaluator;
  if (!data_dir.empty()) {
    data = esn::ingest_speech_commands(data_dir, esn::LabelMap::standard());
    recipe.epochs = epochs_per_candidate;
    recipe.seed = seed;
    evaluator = esn::make_training_evaluator(data.train, data.val, recipe);
  } else {
    // Dry-run evaluator: a deterministic closed-form accuracy driven by
    // the sampled widths. Exercises the search loop without a corpus;
    // results are NOT real accuracies.
    if (!json_mode) {
      std::cout << "note: no --data-dir given, using the synthetic dry-run "
                   "evaluator\n";
    }
    evaluator = [](const esn::ArchitectureSpec& spec, uint64_t) {
      const esn::ResidualTopology topo =
          esn::infer_residual_topology(spec);
      double sum = 0.0;
      for (const auto& [narrow, wide] : topo.blocks) {
        sum += spec.layers[narrow].n;
      }
      return std::min(1.0, 0.9 + sum / 1000.0);
    };
  }

  const std::vector<esn::Candidate> candidates = esn::explore(
      prototype, reqs, esn::UConfig{}, budget, seed, evaluator);

  fs::create_directories(out_dir);
  json listing = json::array();
  for (size_t i = 0; i < candidates.size(); ++i) {
    const esn::Candidate& c = candidates[i];
    char stem[32];
    std::snprintf(stem, sizeof(stem), "cand_%03zu", i);
    const std::string base = (fs::path(out_dir) / stem).string();

    esn::save_spec_file(base + ".spec.json", c.spec);
    esn::Network net = esn::build_network(c.spec, c.seed);
    if (!data_dir.empty()) {
      esn::TrainConfig local = recipe;
      local.seed = esn::derive_seed(recipe.seed, c.seed);
      esn::train(&net, data.train, data.val, local);
    }
    esn::save_network(base + ".esnw", net);

    json metrics = {{"seed", c.seed},
                    {"generation", c.generation},
                    {"val_accuracy", c.metrics.val_accuracy},
                    {"param_count", c.metrics.param_count},
                    {"mac_count", c.metrics.mac_count},
                    {"u_score", c.u_score}};
    std::ofstream mf(base + ".metrics.json");
    mf << metrics.dump(2) << "\n";
    metrics["spec_file"] = base + ".spec.json";
    listing.push_back(std::move(metrics));

    if (!json_mode) {
      std::printf(
          "%s  gen %d  U %.3f  acc %.4f  params %lld  macs %lld\n", stem,
          c.generation, c.u_score, c.metrics.val_accuracy,
          static_cast<long long>(c.metrics.param_count),
          static_cast<long long>(c.metrics.mac_count));
    }
  }
  if (json_mode) {
    json doc;
    doc["config"] = config;
    doc["candidates"] = listing;
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << "wrote " << candidates.size() << " candidates to "
              << out_dir << "\n";
  }
  return kExitOk;
}

int cmd_bench(const std::string& arch, const std::string& spec_path,
              int iters, bool fold, uint64_t seed, bool json_mode) {
  const esn::ArchitectureSpec spec = resolve_spec(arch, spec_path);
  json config = {{"name", spec.name}, {"iters", iters}, {"fold", fold},
                 {"seed", seed}};
  print_config_header("bench", config, json_mode);

  esn::Network net = esn::build_network(spec, seed);
  // warm the running statistics so folding is non-trivial
  esn::Prng warm_rng(seed + 1);
  esn::Tensor warm({2, spec.input[0], spec.input[1], spec.input[2]});
  for (float& v : warm.data) {
    v = static_cast<float>(2.0 * warm_rng.uniform() - 1.0);
  }
  net.forward(warm, esn::Mode::kTrain);

  esn::Network folded = esn::fold_network(net);
  esn::Tensor input({spec.input[0], spec.input[1], spec.input[2]});
  esn::Prng rng(seed + 2);
  for (float& v : input.data) {
    v = static_cast<float>(2.0 * rng.uniform() - 1.0);
  }

  // the folded and unfolded nets must agree before timing means anything
  esn::Tensor a = net.forward(input, esn::Mode::kInfer);
  esn::Tensor b = folded.forward(input, esn::Mode::kInfer);
  int arg_a = 0, arg_b = 0;
  for (int i = 1; i < static_cast<int>(a.data.size()); ++i) {
    if (a.data[i] > a.data[arg_a]) arg_a = i;
    if (b.data[i] > b.data[arg_b]) arg_b = i;
  }
  const bool fold_agrees = arg_a == arg_b;

  esn::Network& bench_net = fold ? folded : net;
  bench_net.forward(input, esn::Mode::kInfer);  // warm-up
  std::vector<double> times_ms;
  times_ms.reserve(iters);
  for (int i = 0; i < iters; ++i) {
    const auto start = std::chrono::steady_clock::now();
    bench_net.forward(input, esn::Mode::kInfer);
    times_ms.push_back(std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - start)
                           .count());
  }
  std::sort(times_ms.begin(), times_ms.end());
  const double median = times_ms[times_ms.size() / 2];
  const double p95 = times_ms[static_cast<size_t>(
      std::min<double>(times_ms.size() - 1.0, times_ms.size() * 0.95))];

  const int64_t params = esn::verify_params(spec).total_computed;
  const int64_t macs = esn::estimate_macs(spec, spec.input);

  if (json_mode) {
    json doc;
    doc["config"] = config;
    doc["median_ms"] = median;
    doc["p95_ms"] = p95;
    doc["params"] = params;
    doc["macs"] = macs;
    doc["fold_agrees"] = fold_agrees;
    std::cout << doc.dump(2) << "\n";
  } else {
    std::printf("%s%s: median %.3f ms, p95 %.3f ms over %d iters\n",
                spec.name.c_str(), fold ? " (folded)" : "", median, p95,
                iters);
    std::printf("params %lld, estimated MACs %lld, folded argmax %s\n",
                static_cast<long long>(params), static_cast<long long>(macs),
                fold_agrees ? "agrees" : "DISAGREES");
  }
  return fold_agrees ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EdgeSpeechNet keyword-spotting pipeline"};
  app.require_subcommand(1);

  bool json_mode = false;
  app.add_flag("--json", json_mode, "emit results as JSON");

  // preprocess
  auto* pre = app.add_subcommand("preprocess", "wav -> feature matrix file");
  std::string pre_input, pre_output;
  pre->add_option("input", pre_input, "input wav file")->required();
  pre->add_option("-o,--output", pre_output, "output .esmf path");

  // verify-arch
  auto* verify = app.add_subcommand("verify-arch",
                                    "check parameter counts against the "
                                    "reference tables");
  std::string verify_arch_name, verify_spec;
  verify->add_option("--arch", verify_arch_name, "builtin variant A|B|C|D");
  verify->add_option("--spec", verify_spec, "architecture spec JSON file");

  // train
  auto* train_cmd = app.add_subcommand("train", "train on a dataset tree");
  std::string train_data, train_arch, train_spec, train_out = "model";
  esn::TrainConfig train_cfg;
  std::vector<int> train_milestones;
  train_cmd->add_option("--data-dir", train_data, "dataset root")->required();
  train_cmd->add_option("--arch", train_arch, "builtin variant A|B|C|D");
  train_cmd->add_option("--spec", train_spec, "architecture spec JSON file");
  train_cmd->add_option("--epochs", train_cfg.epochs, "training epochs");
  train_cmd->add_option("--batch-size", train_cfg.batch_size, "batch size");
  train_cmd->add_option("--lr", train_cfg.learning_rate, "learning rate");
  train_cmd->add_option("--momentum", train_cfg.momentum, "SGD momentum");
  train_cmd->add_option("--weight-decay", train_cfg.weight_decay,
                        "L2 weight decay");
  train_cmd->add_option("--milestones", train_milestones,
                        "epochs at which lr decays by 10x");
  train_cmd->add_option("--seed", train_cfg.seed, "master seed");
  train_cmd->add_option("-o,--out", train_out, "checkpoint prefix");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint");
  std::string eval_weights, eval_spec, eval_arch, eval_data,
      eval_split = "val";
  eval_cmd->add_option("--weights", eval_weights, "checkpoint .esnw")
      ->required();
  eval_cmd->add_option("--spec", eval_spec, "architecture spec JSON file");
  eval_cmd->add_option("--arch", eval_arch, "builtin variant A|B|C|D");
  eval_cmd->add_option("--data-dir", eval_data, "dataset root")->required();
  eval_cmd->add_option("--split", eval_split, "train|val|test")
      ->check(CLI::IsMember({"train", "val", "test"}));

  // predict
  auto* predict_cmd =
      app.add_subcommand("predict", "classify a single wav clip");
  std::string predict_weights, predict_spec, predict_arch, predict_input;
  predict_cmd->add_option("--weights", predict_weights, "checkpoint .esnw")
      ->required();
  predict_cmd->add_option("--spec", predict_spec,
                          "architecture spec JSON file");
  predict_cmd->add_option("--arch", predict_arch,
                          "builtin variant A|B|C|D");
  predict_cmd->add_option("input", predict_input, "input wav")->required();

  // explore
  auto* explore_cmd =
      app.add_subcommand("explore", "progressive architecture search");
  std::string explore_proto, explore_out = "explored", explore_data;
  double explore_min_acc = 0.95;
  int explore_gens = 5, explore_per_gen = 8, explore_epochs = 3;
  uint64_t explore_seed = 0;
  int64_t explore_max_params = 0, explore_max_macs = 0;
  explore_cmd
      ->add_option("--arch-prototype", explore_proto,
                   "prototype spec JSON file")
      ->required();
  explore_cmd->add_option("--min-val-acc", explore_min_acc,
                          "feasibility threshold");
  explore_cmd->add_option("--generations", explore_gens, "generations");
  explore_cmd->add_option("--per-gen", explore_per_gen,
                          "candidates per generation");
  explore_cmd->add_option("--seed", explore_seed, "master seed");
  explore_cmd->add_option("--out", explore_out, "output directory");
  explore_cmd->add_option("--data-dir", explore_data,
                          "dataset root (omit for a synthetic dry run)");
  explore_cmd->add_option("--epochs-per-candidate", explore_epochs,
                          "training epochs per candidate");
  explore_cmd->add_option("--max-params", explore_max_params,
                          "parameter cap (0 = none)");
  explore_cmd->add_option("--max-macs", explore_max_macs,
                          "MAC cap (0 = none)");

  // bench
  auto* bench_cmd =
      app.add_subcommand("bench", "single-clip forward latency");
  std::string bench_arch, bench_spec;
  int bench_iters = 50;
  bool bench_fold = false;
  uint64_t bench_seed = 0;
  bench_cmd->add_option("--arch", bench_arch, "builtin variant A|B|C|D");
  bench_cmd->add_option("--spec", bench_spec, "architecture spec JSON file");
  bench_cmd->add_option("--iters", bench_iters, "timed iterations");
  bench_cmd->add_flag("--fold", bench_fold,
                      "benchmark the batch-norm-folded network");
  bench_cmd->add_option("--seed", bench_seed, "weight seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (pre->parsed()) {
      return cmd_preprocess(pre_input, pre_output, json_mode);
    }
    if (verify->parsed()) {
      if (verify_arch_name.empty() == verify_spec.empty()) {
        std::cerr << "verify-arch needs exactly one of --arch or --spec\n";
        return kExitUsage;
      }
      return cmd_verify_arch(verify_arch_name, verify_spec, json_mode);
    }
    if (train_cmd->parsed()) {
      if (train_arch.empty() == train_spec.empty()) {
        std::cerr << "train needs exactly one of --arch or --spec\n";
        return kExitUsage;
      }
      train_cfg.lr_milestones = train_milestones;
      return cmd_train(train_data, train_arch, train_spec, train_out,
                       train_cfg, json_mode);
    }
    if (eval_cmd->parsed()) {
      if (eval_arch.empty() == eval_spec.empty()) {
        std::cerr << "eval needs exactly one of --arch or --spec\n";
        return kExitUsage;
      }
      return cmd_eval(eval_weights, eval_spec, eval_arch, eval_data,
                      eval_split, json_mode);
    }
    if (predict_cmd->parsed()) {
      if (predict_arch.empty() == predict_spec.empty()) {
        std::cerr << "predict needs exactly one of --arch or --spec\n";
        return kExitUsage;
      }
      return cmd_predict(predict_weights, predict_spec, predict_arch,
                         predict_input, json_mode);
    }
    if (explore_cmd->parsed()) {
      return cmd_explore(explore_proto, explore_min_acc, explore_gens,
                         explore_per_gen, explore_seed, explore_out,
                         explore_data, explore_epochs, explore_max_params,
                         explore_max_macs, json_mode);
    }
    if (bench_cmd->parsed()) {
      if (bench_iters <= 0) {
        std::cerr << "--iters must be positive\n";
        return kExitUsage;
      }
      if (bench_arch.empty() == bench_spec.empty()) {
        std::cerr << "bench needs exactly one of --arch or --spec\n";
        return kExitUsage;
      }
      return cmd_bench(bench_arch, bench_spec, bench_iters, bench_fold,
                       bench_seed, json_mode);
    }
  } catch (const esn::UnknownArchitecture& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const esn::NoFeasibleCandidate& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerifyFailed;
  } catch (const esn::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}
