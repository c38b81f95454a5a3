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

#include "wcnn/training.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <utility>

#include "wcnn/autograd.h"
#include "wcnn/error.h"

namespace wcnn {
namespace {

constexpr int kEvalChunk = 64;

void FillNormal(Tensor& t, double stddev, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, stddev);
  for (float& v : t.data()) v = static_cast<float>(normal(rng));
}

void ResetBlock(ConvBlock& b, std::mt19937_64& rng) {
  const int fan_in = b.weight.dim(1) * b.weight.dim(2) * b.weight.dim(3);
  FillNormal(b.weight, std::sqrt(2.0 / fan_in), rng);
  std::fill(b.bias.data().begin(), b.bias.data().end(), 0.0f);
  std::fill(b.gamma.data().begin(), b.gamma.data().end(), 1.0f);
  std::fill(b.beta.data().begin(), b.beta.data().end(), 0.0f);
  std::fill(b.running_mean.data().begin(), b.running_mean.data().end(), 0.0f);
  std::fill(b.running_var.data().begin(), b.running_var.data().end(), 1.0f);
}

int ArgMax(std::span<const float> row) {
  return static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
}

Tensor Stack(const std::vector<Tensor>& images, std::size_t begin, std::size_t end) {
  const Tensor& first = images[begin];
  Shape shape{static_cast<int>(end - begin)};
  shape.insert(shape.end(), first.shape().begin(), first.shape().end());
  std::vector<float> data;
  data.reserve((end - begin) * first.size());
  for (std::size_t i = begin; i < end; ++i) {
    data.insert(data.end(), images[i].data().begin(), images[i].data().end());
  }
  return Tensor(std::move(shape), std::move(data));
}

// Batch boundaries over n shuffled items; a trailing batch of one joins the
// previous batch because training-mode batch norm needs two samples.
std::vector<std::size_t> BatchBounds(std::size_t n, std::size_t batch) {
  std::vector<std::size_t> bounds{0};
  while (bounds.back() < n) bounds.push_back(std::min(n, bounds.back() + batch));
  if (bounds.size() > 2 && bounds[bounds.size() - 1] - bounds[bounds.size() - 2] == 1) {
    bounds.erase(bounds.end() - 2);
  }
  return bounds;
}

}  // namespace

void TrainConfig::Validate() const {
  if (!(learning_rate > 0.0f)) throw ConfigError("learning_rate must be positive");
  if (!(adam_beta1 > 0.0f && adam_beta1 < 1.0f)) throw ConfigError("adam_beta1 must be in (0,1)");
  if (!(adam_beta2 > 0.0f && adam_beta2 < 1.0f)) throw ConfigError("adam_beta2 must be in (0,1)");
  if (!(adam_eps > 0.0f)) throw ConfigError("adam_eps must be positive");
  if (batch_size < 2) throw ConfigError("batch_size must be at least 2 (batch norm)");
  if (epochs < 1) throw ConfigError("epochs must be at least 1");
  if (crop_target < 1 || crop_source < crop_target) {
    throw ConfigError("need 0 < crop_target <= crop_source");
  }
}

void HeInit(Network& net, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (auto& b : net.trunk()) ResetBlock(b, rng);
  for (auto& b : net.projections()) ResetBlock(b, rng);
  for (auto& d : net.head()) {
    FillNormal(d.weight, std::sqrt(2.0 / d.weight.dim(1)), rng);
    std::fill(d.bias.data().begin(), d.bias.data().end(), 0.0f);
  }
}

OptimizerState MakeOptimizerState(std::span<const NamedTensor> params) {
  OptimizerState state;
  for (const auto& p : params) {
    state.first_moment.emplace_back(p.tensor->shape());
    state.second_moment.emplace_back(p.tensor->shape());
  }
  return state;
}

void AdamStep(OptimizerState& state, std::span<const NamedTensor> params,
              const TrainConfig& config) {
  if (state.first_moment.size() != params.size()) {
    throw StateError("adam: optimizer state was built for a different parameter set");
  }
  for (const auto& p : params) {
    for (float g : p.tensor->grad()) {
      if (!std::isfinite(g)) {
        throw NumericalError("non-finite gradient in parameter " + p.name);
      }
    }
  }
  ++state.step;
  const double b1 = config.adam_beta1;
  const double b2 = config.adam_beta2;
  const float c1 = static_cast<float>(1.0 / (1.0 - std::pow(b1, state.step)));
  const float c2 = static_cast<float>(1.0 / (1.0 - std::pow(b2, state.step)));
  const float lr = config.learning_rate;
  const float eps = config.adam_eps;
  for (std::size_t k = 0; k < params.size(); ++k) {
    Tensor& theta = *params[k].tensor;
    const auto grad = std::as_const(theta).grad();
    auto m = state.first_moment[k].data();
    auto v = state.second_moment[k].data();
    if (m.size() != theta.size()) {
      throw StateError("adam: moment shape mismatch for " + params[k].name);
    }
    for (std::size_t i = 0; i < theta.size(); ++i) {
      const float g = grad.empty() ? 0.0f : grad[i];
      m[i] = config.adam_beta1 * m[i] + (1.0f - config.adam_beta1) * g;
      v[i] = config.adam_beta2 * v[i] + (1.0f - config.adam_beta2) * g * g;
      const float m_hat = m[i] * c1;
      const float v_hat = v[i] * c2;
      theta[i] -= lr * m_hat / (std::sqrt(v_hat) + eps);
    }
  }
}

GcnResult GlobalContrastNormalize(const Tensor& image) {
  double sum = 0.0;
  for (float v : image.data()) sum += v;
  const double n = static_cast<double>(image.size());
  const double mean = n > 0 ? sum / n : 0.0;
  double sq = 0.0;
  for (float v : image.data()) sq += (v - mean) * (v - mean);
  const double stddev = n > 0 ? std::sqrt(sq / n) : 0.0;
  GcnResult out{Tensor(image.shape()), false};
  if (stddev < 1e-8) {
    out.degenerate = true;
    return out;
  }
  for (std::size_t i = 0; i < image.size(); ++i) {
    out.image[i] = static_cast<float>((image[i] - mean) / stddev);
  }
  return out;
}

Tensor Crop(const Tensor& image, int top, int left, int size) {
  if (image.rank() != 3) throw ShapeError("crop: image must be [C,H,W]");
  if (size < 1 || top < 0 || left < 0 || top + size > image.dim(1) ||
      left + size > image.dim(2)) {
    throw ArgumentError("crop window outside " + ShapeToString(image.shape()));
  }
  const int c = image.dim(0);
  Tensor out({c, size, size});
  for (int ch = 0; ch < c; ++ch) {
    for (int i = 0; i < size; ++i) {
      const float* src = &image.data()[(static_cast<std::size_t>(ch) * image.dim(1) + top + i) *
                                           image.dim(2) + left];
      std::copy(src, src + size,
                &out.data()[(static_cast<std::size_t>(ch) * size + i) * size]);
    }
  }
  return out;
}

Tensor CenterCrop(const Tensor& image, int size) {
  if (image.rank() != 3) throw ShapeError("crop: image must be [C,H,W]");
  return Crop(image, (image.dim(1) - size) / 2, (image.dim(2) - size) / 2, size);
}

Tensor FlipHorizontal(const Tensor& image) {
  if (image.rank() != 3) throw ShapeError("flip: image must be [C,H,W]");
  Tensor out = image;
  const int w = image.dim(2);
  const std::size_t rows = image.size() / w;
  for (std::size_t r = 0; r < rows; ++r) {
    auto row = out.data().subspan(r * w, w);
    std::reverse(row.begin(), row.end());
  }
  return out;
}

Tensor Augment(const Tensor& image, const TrainConfig& config, std::mt19937_64& rng) {
  if (image.rank() != 3) throw ShapeError("augment: image must be [C,H,W]");
  if (config.crop_source < config.crop_target) {
    throw ArgumentError("augment: crop source " + std::to_string(config.crop_source) +
                        " smaller than target " + std::to_string(config.crop_target));
  }
  if (image.dim(1) != config.crop_source || image.dim(2) != config.crop_source) {
    throw ArgumentError("augment: image is " + ShapeToString(image.shape()) +
                        ", expected spatial size " + std::to_string(config.crop_source));
  }
  std::uniform_int_distribution<int> offset(0, config.crop_source - config.crop_target);
  const int top = offset(rng);
  const int left = offset(rng);
  Tensor out = Crop(image, top, left, config.crop_target);
  if (config.flip && std::bernoulli_distribution(0.5)(rng)) out = FlipHorizontal(out);
  return out;
}

Tensor PrepareTestImage(const Tensor& image, const TrainConfig& config) {
  return GlobalContrastNormalize(CenterCrop(image, config.crop_target)).image;
}

EvalResult ScorePredictions(std::span<const int> truth, std::span<const int> predicted,
                            int num_classes) {
  if (truth.size() != predicted.size()) {
    throw ShapeError("score: truth and prediction counts differ");
  }
  EvalResult r;
  r.confusion.assign(num_classes, std::vector<int>(num_classes, 0));
  int correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0 || truth[i] >= num_classes || predicted[i] < 0 ||
        predicted[i] >= num_classes) {
      throw ArgumentError("score: label outside [0," + std::to_string(num_classes) + ")");
    }
    ++r.confusion[truth[i]][predicted[i]];
    correct += truth[i] == predicted[i];
  }
  r.total = static_cast<int>(truth.size());
  r.accuracy = r.total ? static_cast<double>(correct) / r.total : 0.0;
  return r;
}

std::vector<int> PredictLabels(const Network& net, const std::vector<Tensor>& inputs) {
  std::vector<int> labels;
  labels.reserve(inputs.size());
  for (std::size_t b = 0; b < inputs.size(); b += kEvalChunk) {
    const std::size_t e = std::min(inputs.size(), b + kEvalChunk);
    const Tensor logits = net.Predict(Stack(inputs, b, e));
    const int k = logits.dim(1);
    for (std::size_t i = 0; i < e - b; ++i) {
      labels.push_back(ArgMax(logits.data().subspan(i * k, k)));
    }
  }
  return labels;
}

EvalResult Evaluate(const Network& net, const Dataset& dataset, std::span<const int> items,
                    const TrainConfig& config) {
  std::vector<Tensor> inputs;
  std::vector<int> truth;
  for (int i : items) {
    inputs.push_back(PrepareTestImage(dataset.items.at(i).image, config));
    truth.push_back(dataset.items[i].label);
  }
  return ScorePredictions(truth, PredictLabels(net, inputs), dataset.num_classes());
}

TrainResult Train(Network& net, const Dataset& dataset, const SplitPlan& split,
                  const TrainConfig& config,
                  const std::function<void(const EpochMetrics&)>& on_epoch) {
  config.Validate();
  if (split.train.empty() || split.test.empty()) {
    throw ArgumentError("train: split " + std::to_string(split.index) +
                        " has an empty train or test side");
  }
  const Shape expected{dataset.channels(), config.crop_target, config.crop_target};
  if (net.spec().input_shape != expected) {
    throw ArgumentError("train: network input " + ShapeToString(net.spec().input_shape) +
                        " does not match data " + ShapeToString(expected));
  }
  if (net.spec().num_classes != dataset.num_classes()) {
    throw ArgumentError("train: network has " + std::to_string(net.spec().num_classes) +
                        " outputs, dataset has " + std::to_string(dataset.num_classes()) +
                        " classes");
  }

  std::vector<Tensor> test_inputs;
  std::vector<int> test_truth;
  for (int i : split.test) {
    test_inputs.push_back(PrepareTestImage(dataset.items.at(i).image, config));
    test_truth.push_back(dataset.items[i].label);
  }

  std::mt19937_64 rng(config.seed);
  auto params = net.Parameters();
  OptimizerState opt = MakeOptimizerState(params);
  TrainResult result{net, 0, -1.0, {}, 0};
  std::vector<int> order = split.train;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    std::shuffle(order.begin(), order.end(), rng);
    const auto bounds = BatchBounds(order.size(), config.batch_size);
    double loss_sum = 0.0;
    int correct = 0;
    for (std::size_t b = 0; b + 1 < bounds.size(); ++b) {
      std::vector<Tensor> images;
      std::vector<int> labels;
      for (std::size_t i = bounds[b]; i < bounds[b + 1]; ++i) {
        const DatasetItem& item = dataset.items.at(order[i]);
        GcnResult g = GlobalContrastNormalize(Augment(item.image, config, rng));
        result.degenerate_images += g.degenerate;
        images.push_back(std::move(g.image));
        labels.push_back(item.label);
      }
      net.ZeroGrad();
      Graph graph(Mode::kTraining);
      const Var logits = net.Forward(graph, Stack(images, 0, images.size()));
      const Var loss = SoftmaxCrossEntropy(graph, logits, labels);
      const float loss_value = graph.value(loss)[0];
      if (!std::isfinite(loss_value)) {
        throw NumericalError("non-finite loss at epoch " + std::to_string(epoch) +
                             ", batch " + std::to_string(b + 1));
      }
      graph.Backward(loss);
      AdamStep(opt, params, config);
      loss_sum += double{loss_value} * labels.size();
      const Tensor& lv = graph.value(logits);
      const int k = lv.dim(1);
      for (std::size_t i = 0; i < labels.size(); ++i) {
        correct += ArgMax(lv.data().subspan(i * k, k)) == labels[i];
      }
    }
    EpochMetrics m;
    m.epoch = epoch;
    m.train_loss = loss_sum / order.size();
    m.train_acc = static_cast<double>(correct) / order.size();
    m.test_acc = ScorePredictions(test_truth, PredictLabels(net, test_inputs),
                                  dataset.num_classes())
                     .accuracy;
    if (config.record_timing) {
      m.seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    result.log.push_back(m);
    if (m.test_acc > result.best_test_acc) {
      result.best_test_acc = m.test_acc;
      result.best_epoch = epoch;
      result.best = net;
    }
    if (on_epoch) on_epoch(m);
  }
  return result;
}

std::string MetricsCsv(std::span<const EpochMetrics> log) {
  std::ostringstream out;
  out << "epoch,train_loss,train_acc,test_acc,seconds\n";
  char line[160];
  for (const auto& m : log) {
    std::snprintf(line, sizeof(line), "%d,%.6f,%.6f,%.6f,%.3f\n", m.epoch, m.train_loss,
                  m.train_acc, m.test_acc, m.seconds);
    out << line;
  }
  return out.str();
}

std::string ConfusionCsv(const EvalResult& result, std::span<const std::string> classes) {
  std::ostringstream out;
  out << "true\\predicted";
  for (const auto& c : classes) out << ',' << c;
  out << '\n';
  for (std::size_t i = 0; i < result.confusion.size(); ++i) {
    out << (i < classes.size() ? classes[i] : std::to_string(i));
    for (int v : result.confusion[i]) out << ',' << v;
    out << '\n';
  }
  return out.str();
}

}  // namespace wcnn
