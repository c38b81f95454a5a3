// Copyright 2026 The WCNN Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "wcnn/checkpoint.h"
#include "wcnn/error.h"
#include "wcnn/kernels.h"
#include "wcnn/netpbm.h"
#include "wcnn/network.h"
#include "wcnn/synthetic.h"
#include "wcnn/training.h"
#include "wcnn/wavelet.h"

namespace wcnn::cli {
namespace {

namespace fs = std::filesystem;

std::string Fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

void EnsureDirectory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string());
  }
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  f.close();
  if (!f) throw IoError("cannot write " + path.string());
}

std::vector<int> ParseIntList(const std::string& what, const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("bad " + what + " '" + text + "'");
    }
  }
  if (out.empty()) throw ConfigError("empty " + what);
  return out;
}

// Options shared by train and eval that map one-to-one onto config keys.
struct ConfigFlags {
  std::string config_file;
  std::vector<std::string> sets;
  std::vector<std::pair<CLI::Option*, std::string>> keyed;
  std::deque<std::string> values;  // stable addresses for CLI11

  void Add(CLI::App* cmd, bool network_flags) {
    cmd->add_option("--config", config_file, "key = value config file; flags override it");
    cmd->add_option("--set", sets, "override one config key (key=value), repeatable");
    Bind(cmd, "--data", "data", "dataset root (class/group/image.ppm)");
    Bind(cmd, "--synthetic", "synthetic", "synthetic preset: default | coarse");
    Bind(cmd, "--split", "split", "auto | kth | kth:<i> | holdout:<groups> | list:<train>,<test>");
    Bind(cmd, "--seed", "seed", "random seed");
    Bind(cmd, "--crop-source", "crop_source", "image size before cropping");
    Bind(cmd, "--crop-target", "crop_target", "network input size");
    if (network_flags) {
      Bind(cmd, "--levels", "levels", "decomposition levels (1-5)");
      Bind(cmd, "--stages", "stages", "stride-2 stages; 0 = automatic (4 when the input allows)");
      Bind(cmd, "--base-channels", "base_channels", "width of the first stage");
      Bind(cmd, "--subbands", "subbands", "all | detail-only");
      Bind(cmd, "--epochs", "epochs", "training epochs");
      Bind(cmd, "--batch-size", "batch_size", "mini-batch size");
      Bind(cmd, "--lr", "learning_rate", "Adam learning rate");
    }
  }

  void Bind(CLI::App* cmd, const std::string& flag, const std::string& key,
            const std::string& help) {
    values.emplace_back();
    keyed.emplace_back(cmd->add_option(flag, values.back(), help), key);
  }

  RunConfig Resolve() const {
    RunConfig config = config_file.empty() ? RunConfig{} : LoadRunConfig(config_file);
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
      SetRunConfigValue(config, s.substr(0, eq), s.substr(eq + 1));
    }
    const CLI::Option* data = nullptr;
    const CLI::Option* synthetic = nullptr;
    for (std::size_t i = 0; i < keyed.size(); ++i) {
      if (keyed[i].first->count() == 0) continue;
      if (keyed[i].second == "data") data = keyed[i].first;
      if (keyed[i].second == "synthetic") synthetic = keyed[i].first;
      SetRunConfigValue(config, keyed[i].second, values[i]);
    }
    if (data && synthetic) throw ConfigError("--data and --synthetic are exclusive");
    if (synthetic) config.data.clear();
    config.Validate();
    return config;
  }
};

double Mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / v.size();
}

// Sample standard deviation (n - 1); 0 for a single value.
double StdDev(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = Mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / (v.size() - 1));
}

int CmdDecompose(const std::string& input, int levels, const std::string& out_dir,
                 std::ostream& out) {
  if (levels < 1) throw ArgumentError("levels must be at least 1");
  const Tensor image = LoadPnm(input);
  const WaveletFilterPair haar = Haar();
  const MraDecomposition mra = Decompose(image, haar, levels);
  EnsureDirectory(out_dir);
  for (std::size_t l = 0; l < mra.levels.size(); ++l) {
    const Subbands& b = mra.levels[l];
    const std::string stem = "level" + std::to_string(l + 1) + "_";
    SavePgm(b.ll, fs::path(out_dir) / (stem + "LL.pgm"), PixelMapping::kMinMax);
    SavePgm(b.lh, fs::path(out_dir) / (stem + "LH.pgm"), PixelMapping::kSymmetric);
    SavePgm(b.hl, fs::path(out_dir) / (stem + "HL.pgm"), PixelMapping::kSymmetric);
    SavePgm(b.hh, fs::path(out_dir) / (stem + "HH.pgm"), PixelMapping::kSymmetric);
  }
  const Tensor back = Reconstruct(mra, haar);
  double err = 0.0;
  for (std::size_t i = 0; i < image.size(); ++i) {
    err = std::max(err, static_cast<double>(std::fabs(back[i] - image[i])));
  }
  char line[64];
  std::snprintf(line, sizeof(line), "%.3e", err);
  out << "subbands=" << 4 * levels << " max_abs_error=" << line << '\n';
  return kExitOk;
}

int CmdTrain(const RunConfig& config, const std::string& out_dir, bool quiet,
             std::ostream& out) {
  EnsureDirectory(out_dir);
  WriteText(fs::path(out_dir) / "config.resolved", SerializeRunConfig(config));
  const Dataset dataset = LoadData(config);
  const std::vector<SplitPlan> plans = ResolveSplits(dataset, config);
  const NetworkSpec spec = config.Spec(dataset.channels(), dataset.num_classes());
  spec.Validate();

  std::vector<double> accuracies;
  std::size_t params = 0;
  for (const SplitPlan& plan : plans) {
    const fs::path dir = plans.size() == 1
                             ? fs::path(out_dir)
                             : fs::path(out_dir) / ("split" + std::to_string(plan.index));
    EnsureDirectory(dir);
    Network net(spec);
    HeInit(net, config.train.seed);
    params = CountParams(net).total;
    auto on_epoch = [&](const EpochMetrics& m) {
      if (quiet) return;
      out << "split=" << plan.index << " epoch=" << m.epoch
          << " train_loss=" << Fixed(m.train_loss) << " train_acc=" << Fixed(m.train_acc, 4)
          << " test_acc=" << Fixed(m.test_acc, 4) << '\n'
          << std::flush;
    };
    const TrainResult result = Train(net, dataset, plan, config.train, on_epoch);
    SaveCheckpoint(result.best, dir / "checkpoint.wcnn");
    WriteText(dir / "metrics.csv", MetricsCsv(result.log));
    const EvalResult eval = Evaluate(result.best, dataset, plan.test, config.train);
    WriteText(dir / "confusion.csv", ConfusionCsv(eval, dataset.classes));
    out << "split=" << plan.index << " best_epoch=" << result.best_epoch
        << " test_acc=" << Fixed(eval.accuracy, 4);
    if (result.degenerate_images > 0) out << " degenerate_inputs=" << result.degenerate_images;
    out << '\n';
    accuracies.push_back(eval.accuracy);
  }
  if (plans.size() > 1) {
    out << "splits=" << plans.size() << " mean_test_acc=" << Fixed(Mean(accuracies), 4)
        << " std_test_acc=" << Fixed(StdDev(accuracies), 4) << '\n';
  }
  out << "final_test_acc=" << Fixed(Mean(accuracies), 4) << " params=" << params << '\n';
  return kExitOk;
}

void PrintParams(const Network& net, std::ostream& out) {
  const ParamCount count = CountParams(net);
  std::size_t name_w = 5;
  std::size_t desc_w = 11;
  for (const auto& l : count.layers) {
    name_w = std::max(name_w, l.name.size());
    desc_w = std::max(desc_w, l.description.size());
  }
  char line[512];
  std::snprintf(line, sizeof(line), "%-*s  %-9s  %-*s  %12s\n", static_cast<int>(name_w), "layer",
                "kind", static_cast<int>(desc_w), "description", "params");
  out << line;
  for (const auto& l : count.layers) {
    std::snprintf(line, sizeof(line), "%-*s  %-9s  %-*s  %12zu\n", static_cast<int>(name_w),
                  l.name.c_str(), ToString(l.kind).c_str(), static_cast<int>(desc_w),
                  l.description.c_str(), l.params);
    out << line;
  }
  out << "total=" << count.total << '\n';
}

int CmdEval(RunConfig config, const std::string& checkpoint, const std::string& out_dir,
            std::ostream& out) {
  const Network net = LoadCheckpoint(checkpoint);
  const NetworkSpec& spec = net.spec();
  if (spec.input_shape[1] != spec.input_shape[2]) {
    throw SpecMismatchError("checkpoint input is not square");
  }
  config.train.crop_target = spec.input_shape[1];
  config.train.crop_source = std::max(config.train.crop_source, config.train.crop_target);
  const Dataset dataset = LoadData(config);
  if (dataset.num_classes() != spec.num_classes || dataset.channels() != spec.input_shape[0]) {
    throw SpecMismatchError("checkpoint expects " + std::to_string(spec.num_classes) +
                            " classes of " + std::to_string(spec.input_shape[0]) +
                            "-channel images; data has " +
                            std::to_string(dataset.num_classes()) + " classes of " +
                            std::to_string(dataset.channels()) + " channels");
  }
  const std::vector<SplitPlan> plans = ResolveSplits(dataset, config);
  const SplitPlan& plan = plans.front();
  const EvalResult r = Evaluate(net, dataset, plan.test, config.train);
  const fs::path dir = out_dir.empty() ? fs::path(checkpoint).parent_path() : fs::path(out_dir);
  if (!dir.empty()) EnsureDirectory(dir);
  WriteText(dir / "confusion.csv", ConfusionCsv(r, dataset.classes));
  const int correct = static_cast<int>(std::lround(r.accuracy * r.total));
  out << "split=" << plan.index << " accuracy=" << Fixed(r.accuracy, 4) << " correct=" << correct
      << " total=" << r.total << '\n';
  return kExitOk;
}

int CmdSynth(const RunConfig& config, const std::string& out_dir, std::ostream& out) {
  const Dataset ds = GenerateSynthetic(config.Synthetic());
  for (const auto& item : ds.items) {
    const fs::path path = fs::path(out_dir) / item.relative_path;
    EnsureDirectory(path.parent_path());
    SavePpm(item.image, path);
  }
  out << "classes=" << ds.num_classes() << " images=" << ds.items.size() << '\n';
  return kExitOk;
}

void ApplyThreadEnv() {
  const char* env = std::getenv("WCNN_THREADS");
  if (env == nullptr || *env == '\0') return;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1) throw ConfigError(std::string("WCNN_THREADS must be a positive integer, got '") + env + "'");
  kernels::SetMaxThreads(static_cast<int>(n));
}

}  // namespace

int ExitCodeFor(const std::exception& e) {
  if (dynamic_cast<const NumericalError*>(&e)) return kExitNumeric;
  if (dynamic_cast<const IoError*>(&e) || dynamic_cast<const CodecError*>(&e) ||
      dynamic_cast<const IntegrityError*>(&e) || dynamic_cast<const SpecMismatchError*>(&e) ||
      dynamic_cast<const IngestionError*>(&e)) {
    return kExitIo;
  }
  if (dynamic_cast<const Error*>(&e)) return kExitUsage;
  return kExitInternal;
}

Dataset LoadData(const RunConfig& config) {
  if (config.data.empty()) return GenerateSynthetic(config.Synthetic());
  return IngestDirectory(config.data, config.train.crop_source);
}

std::vector<SplitPlan> ResolveSplits(const Dataset& dataset, const RunConfig& config) {
  std::string split = config.split;
  if (split == "auto") split = config.data.empty() ? "holdout:0" : "kth";
  std::vector<SplitPlan> plans;
  if (split == "kth") {
    plans = KthStyleSplits(dataset);
  } else if (split.rfind("kth:", 0) == 0) {
    const int i = ParseIntList("split index", split.substr(4)).front();
    auto all = KthStyleSplits(dataset);
    if (i < 0 || i >= static_cast<int>(all.size())) {
      throw ConfigError("split index " + std::to_string(i) + " outside [0," +
                        std::to_string(all.size()) + ")");
    }
    plans.push_back(std::move(all[i]));
  } else if (split.rfind("holdout:", 0) == 0) {
    const auto groups = ParseIntList("holdout groups", split.substr(8));
    plans.push_back(GroupHoldoutSplit(dataset, groups));
  } else if (split.rfind("list:", 0) == 0) {
    const std::string files = split.substr(5);
    const auto comma = files.find(',');
    if (comma == std::string::npos) throw ConfigError("list split needs <train>,<test>");
    const auto train = ReadSplitList(files.substr(0, comma));
    const auto test = ReadSplitList(files.substr(comma + 1));
    plans.push_back(FixedListSplit(dataset, train, test));
  } else {
    throw ConfigError("unknown split '" + split + "'");
  }
  for (const auto& p : plans) ValidateSplit(dataset, p);
  return plans;
}

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Wavelet CNN toolkit: multiresolution decomposition, training, evaluation", "wcnn"};
  app.require_subcommand(1);

  auto* decompose = app.add_subcommand("decompose", "write the subbands of a PPM/PGM image");
  std::string input;
  int levels = 3;
  std::string out_dir;
  decompose->add_option("input", input, "P5/P6 image")->required();
  decompose->add_option("--levels", levels, "decomposition levels")->capture_default_str();
  decompose->add_option("--out", out_dir, "output directory")->required();

  auto* train = app.add_subcommand("train", "train a wavelet CNN");
  ConfigFlags train_flags;
  train_flags.Add(train, true);
  bool quiet = false;
  train->add_option("--out", out_dir, "output directory")->required();
  train->add_flag("--quiet", quiet, "suppress per-epoch lines");

  auto* params = app.add_subcommand("params", "print trainable parameter counts per layer");
  NetworkSpec pspec;
  int input_size = 64;
  int channels = 3;
  std::string subbands = "all";
  std::string checkpoint;
  params->add_option("--levels", pspec.levels, "decomposition levels")->capture_default_str();
  params->add_option("--stages", pspec.stages, "stride-2 stages; 0 = automatic (4 when the input allows)")
      ->capture_default_str();
  params->add_option("--base-channels", pspec.base_channels, "width of the first stage")
      ->capture_default_str();
  params->add_option("--classes", pspec.num_classes, "output classes")->capture_default_str();
  params->add_option("--input-size", input_size, "square input extent")->capture_default_str();
  params->add_option("--channels", channels, "input channels")->capture_default_str();
  params->add_option("--subbands", subbands, "all | detail-only")->capture_default_str();
  params->add_option("--checkpoint", checkpoint, "count a saved network instead");

  auto* eval = app.add_subcommand("eval", "evaluate a checkpoint on a test split");
  ConfigFlags eval_flags;
  eval_flags.Add(eval, false);
  eval->add_option("--checkpoint", checkpoint, "checkpoint file")->required();
  eval->add_option("--out", out_dir, "output directory (default: next to the checkpoint)");

  auto* synth = app.add_subcommand("synth", "export a synthetic dataset as a PPM tree");
  ConfigFlags synth_flags;
  synth_flags.Add(synth, false);
  synth->add_option("--out", out_dir, "output directory")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    ApplyThreadEnv();
    if (*decompose) return CmdDecompose(input, levels, out_dir, out);
    if (*train) return CmdTrain(train_flags.Resolve(), out_dir, quiet, out);
    if (*eval) return CmdEval(eval_flags.Resolve(), checkpoint, out_dir, out);
    if (*synth) return CmdSynth(synth_flags.Resolve(), out_dir, out);
    if (*params) {
      if (!checkpoint.empty()) {
        PrintParams(LoadCheckpoint(checkpoint), out);
        return kExitOk;
      }
      pspec.input_shape = {channels, input_size, input_size};
      pspec.subband_mode = ParseSubbandMode(subbands);
      PrintParams(Network(pspec), out);
      return kExitOk;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return ExitCodeFor(e);
  }
  return kExitInternal;
}

}  // namespace wcnn::cli
