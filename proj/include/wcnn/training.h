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

#ifndef WCNN_TRAINING_H_
#define WCNN_TRAINING_H_

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "wcnn/dataset.h"
#include "wcnn/network.h"
#include "wcnn/tensor.h"

namespace wcnn {

struct TrainConfig {
  float learning_rate = 1e-3f;
  float adam_beta1 = 0.9f;
  float adam_beta2 = 0.999f;
  float adam_eps = 1e-8f;
  int batch_size = 32;
  int epochs = 30;
  std::uint64_t seed = 1;
  // Training images arrive at crop_source and are randomly cropped to
  // crop_target (the network input); test images are centre-cropped.
  int crop_source = 72;
  int crop_target = 64;
  bool flip = true;
  // Wall-clock seconds are written to the metrics log only when set; off by
  // default so logs are a pure function of (seed, data, config).
  bool record_timing = false;

  // Throws ConfigError.
  void Validate() const;
  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

// Convolution and dense weights ~ N(0, sqrt(2 / fan_in)); biases 0;
// batch-norm gamma 1, beta 0, running statistics reset.
void HeInit(Network& net, std::uint64_t seed);

struct OptimizerState {
  std::vector<Tensor> first_moment;
  std::vector<Tensor> second_moment;
  std::int64_t step = 0;
};

OptimizerState MakeOptimizerState(std::span<const NamedTensor> params);

// One bias-corrected Adam update from the gradients stored on params.
// Throws NumericalError naming the first parameter with a non-finite
// gradient; no parameter is modified in that case.
void AdamStep(OptimizerState& state, std::span<const NamedTensor> params,
              const TrainConfig& config);

struct GcnResult {
  Tensor image;
  bool degenerate = false;  // std < 1e-8; image is all zeros
};

// Global contrast normalization: zero mean and unit standard deviation over
// all C*H*W values.
GcnResult GlobalContrastNormalize(const Tensor& image);

Tensor Crop(const Tensor& image, int top, int left, int size);
Tensor CenterCrop(const Tensor& image, int size);
Tensor FlipHorizontal(const Tensor& image);

// Uniform random crop_target window, then a horizontal flip with
// probability 1/2 when enabled.
Tensor Augment(const Tensor& image, const TrainConfig& config, std::mt19937_64& rng);

// Network input for evaluation: centre crop followed by GCN.
Tensor PrepareTestImage(const Tensor& image, const TrainConfig& config);

struct EpochMetrics {
  int epoch = 0;
  double train_loss = 0.0;
  double train_acc = 0.0;
  double test_acc = 0.0;
  double seconds = 0.0;
};

struct TrainResult {
  Network best;  // parameters at the epoch with the highest test accuracy
  int best_epoch = 0;
  double best_test_acc = 0.0;
  std::vector<EpochMetrics> log;
  int degenerate_images = 0;  // GCN-flagged inputs seen during training
};

// Adam over seeded mini-batches. `net` holds the final-epoch parameters on
// return. Throws ArgumentError on an empty split or a spec that does not
// fit the data, NumericalError on a non-finite loss.
TrainResult Train(Network& net, const Dataset& dataset, const SplitPlan& split,
                  const TrainConfig& config,
                  const std::function<void(const EpochMetrics&)>& on_epoch = {});

struct EvalResult {
  double accuracy = 0.0;
  std::vector<std::vector<int>> confusion;  // [true][predicted]
  int total = 0;
};

EvalResult ScorePredictions(std::span<const int> truth, std::span<const int> predicted,
                            int num_classes);
std::vector<int> PredictLabels(const Network& net, const std::vector<Tensor>& inputs);
EvalResult Evaluate(const Network& net, const Dataset& dataset,
                    std::span<const int> items, const TrainConfig& config);

// "epoch,train_loss,train_acc,test_acc,seconds" plus one row per epoch.
std::string MetricsCsv(std::span<const EpochMetrics> log);
std::string ConfusionCsv(const EvalResult& result, std::span<const std::string> classes);

}  // namespace wcnn

#endif  // WCNN_TRAINING_H_
