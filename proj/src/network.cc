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

#include "wcnn/network.h"

#include <algorithm>
#include <cstddef>
#include <utility>

#include "wcnn/error.h"

namespace wcnn {
namespace {

ConvBlock MakeConvBlock(std::string name, int in, int out, int stride) {
  ConvBlock b;
  b.name = std::move(name);
  b.stride = stride;
  b.weight = Tensor({out, in, 3, 3});
  b.bias = Tensor({out});
  b.gamma = Tensor({out}, 1.0f);
  b.beta = Tensor({out});
  b.running_mean = Tensor({out});
  b.running_var = Tensor({out}, 1.0f);
  return b;
}

DenseLayer MakeDense(std::string name, int in, int out, bool relu) {
  return {std::move(name), Tensor({out, in}), Tensor({out}), relu};
}

std::string ConvDescription(const ConvBlock& b) {
  return "conv3x3 " + std::to_string(b.weight.dim(1)) + "->" +
         std::to_string(b.weight.dim(0)) + " stride " + std::to_string(b.stride);
}

}  // namespace

std::string ToString(SubbandMode mode) {
  return mode == SubbandMode::kAll ? "all" : "detail-only";
}

SubbandMode ParseSubbandMode(const std::string& text) {
  if (text == "all") return SubbandMode::kAll;
  if (text == "detail-only") return SubbandMode::kDetailOnly;
  throw ArgumentError("subband mode must be 'all' or 'detail-only', got '" +
                      text + "'");
}

std::string ToString(LayerKind kind) {
  switch (kind) {
    case LayerKind::kConv: return "conv";
    case LayerKind::kBatchNorm: return "batchnorm";
    case LayerKind::kWavelet: return "wavelet";
    case LayerKind::kEnergy: return "energy";
    case LayerKind::kLinear: return "linear";
  }
  return "?";
}

std::vector<int> DefaultStageChannels(int base_channels, int stages) {
  std::vector<int> channels;
  for (int s = 0; s <= stages; ++s) channels.push_back(base_channels << (s / 2));
  return channels;
}

int NetworkSpec::ResolvedStages() const {
  if (stages > 0) return stages;
  int halvings = 0;
  if (input_shape.size() == 3 && input_shape[1] > 0 && input_shape[2] > 0) {
    for (int h = input_shape[1], w = input_shape[2]; h % 2 == 0 && w % 2 == 0;
         h /= 2, w /= 2) {
      ++halvings;
    }
  }
  return std::max(levels, std::min(4, halvings));
}

std::vector<int> NetworkSpec::ResolvedStageChannels() const {
  if (!stage_channels.empty()) return stage_channels;
  return DefaultStageChannels(base_channels, ResolvedStages());
}

int NetworkSpec::SubbandChannels(int level) const {
  const int bands =
      (subband_mode == SubbandMode::kAll || level == levels) ? 4 : 3;
  return bands * input_shape.at(0);
}

void NetworkSpec::Validate() const {
  if (input_shape.size() != 3 ||
      std::any_of(input_shape.begin(), input_shape.end(),
                  [](int d) { return d <= 0; })) {
    throw BuildError("input shape must be positive [C,H,W], got " +
                     ShapeToString(input_shape));
  }
  if (levels < 1 || levels > kMaxLevels) {
    throw BuildError("decomposition level must be in [1," +
                     std::to_string(kMaxLevels) + "], got " +
                     std::to_string(levels));
  }
  const int s = ResolvedStages();
  if (s < levels || s > kMaxLevels) {
    throw BuildError("stride-2 stage count must be in [levels=" +
                     std::to_string(levels) + "," + std::to_string(kMaxLevels) +
                     "], got " + std::to_string(s));
  }
  if (base_channels < 1) throw BuildError("base_channels must be positive");
  if (num_classes < 2) throw BuildError("num_classes must be at least 2");
  if (!stage_channels.empty() &&
      (static_cast<int>(stage_channels.size()) != s + 1 ||
       std::any_of(stage_channels.begin(), stage_channels.end(),
                   [](int c) { return c <= 0; }))) {
    throw BuildError("stage_channels must list " + std::to_string(s + 1) +
                     " positive widths");
  }
  int h = input_shape[1];
  int w = input_shape[2];
  for (int stage = 1; stage <= s; ++stage) {
    if (h % 2 != 0 || w % 2 != 0) {
      throw BuildError("stage " + std::to_string(stage) + " receives a " +
                       std::to_string(h) + "x" + std::to_string(w) +
                       " map; extents entering a stride-2 stage must be even");
    }
    h /= 2;
    w /= 2;
  }
}

Network::Network(const NetworkSpec& spec) : spec_(spec), filters_(Haar()) {
  spec_.Validate();
  const int c = spec_.input_shape[0];
  const int stages = spec_.ResolvedStages();
  const auto channels = spec_.ResolvedStageChannels();

  // Shape ledger: the trunk at stage s and the level-s subbands must agree.
  int trunk_h = spec_.input_shape[1];
  int trunk_w = spec_.input_shape[2];
  int band_h = trunk_h;
  int band_w = trunk_w;
  trunk_.push_back(MakeConvBlock("conv0", c, channels[0], 1));
  for (int s = 1; s <= stages; ++s) {
    trunk_h = (trunk_h + 2 - 3) / 2 + 1;
    trunk_w = (trunk_w + 2 - 3) / 2 + 1;
    const std::string stage = std::to_string(s);
    trunk_.push_back(MakeConvBlock("conv" + stage + "a", channels[s - 1], channels[s], 2));
    int joined = channels[s];
    if (s <= spec_.levels) {
      band_h /= 2;
      band_w /= 2;
      if (band_h != trunk_h || band_w != trunk_w) {
        throw BuildError("stage " + stage + ": trunk map " +
                         std::to_string(trunk_h) + "x" + std::to_string(trunk_w) +
                         " does not match level-" + stage + " subbands " +
                         std::to_string(band_h) + "x" + std::to_string(band_w));
      }
      projections_.push_back(MakeConvBlock("proj" + stage, spec_.SubbandChannels(s),
                                           spec_.base_channels, 1));
      junctions_.push_back({s, trunk_h, trunk_w, channels[s], spec_.base_channels});
      joined += spec_.base_channels;
    }
    trunk_.push_back(MakeConvBlock("conv" + stage + "b", joined, channels[s], 1));
  }
  const int hidden = spec_.HeadWidth();
  head_.push_back(MakeDense("fc1", channels[stages], hidden, true));
  head_.push_back(MakeDense("fc2", hidden, hidden, true));
  head_.push_back(MakeDense("fc3", hidden, spec_.num_classes, false));
}

std::vector<NamedTensor> Network::Parameters() {
  std::vector<NamedTensor> out;
  auto add_block = [&out](ConvBlock& b) {
    out.push_back({b.name + ".weight", &b.weight});
    out.push_back({b.name + ".bias", &b.bias});
    out.push_back({b.name + ".bn.gamma", &b.gamma});
    out.push_back({b.name + ".bn.beta", &b.beta});
  };
  for (auto& b : trunk_) add_block(b);
  for (auto& b : projections_) add_block(b);
  for (auto& d : head_) {
    out.push_back({d.name + ".weight", &d.weight});
    out.push_back({d.name + ".bias", &d.bias});
  }
  return out;
}

std::vector<NamedConstTensor> Network::Parameters() const {
  std::vector<NamedConstTensor> out;
  for (const auto& p : const_cast<Network*>(this)->Parameters()) {
    out.push_back({p.name, p.tensor});
  }
  return out;
}

std::vector<NamedTensor> Network::Buffers() {
  std::vector<NamedTensor> out;
  auto add_block = [&out](ConvBlock& b) {
    out.push_back({b.name + ".bn.running_mean", &b.running_mean});
    out.push_back({b.name + ".bn.running_var", &b.running_var});
  };
  for (auto& b : trunk_) add_block(b);
  for (auto& b : projections_) add_block(b);
  return out;
}

std::vector<NamedConstTensor> Network::Buffers() const {
  std::vector<NamedConstTensor> out;
  for (const auto& p : const_cast<Network*>(this)->Buffers()) {
    out.push_back({p.name, p.tensor});
  }
  return out;
}

std::vector<LayerInfo> Network::Layers() const {
  std::vector<LayerInfo> rows;
  auto add_block = [&rows](const ConvBlock& b) {
    rows.push_back({b.name, LayerKind::kConv, ConvDescription(b),
                    b.weight.size() + b.bias.size()});
    rows.push_back({b.name + ".bn", LayerKind::kBatchNorm,
                    "batchnorm " + std::to_string(b.gamma.size()),
                    b.gamma.size() + b.beta.size()});
  };
  const int stages = spec_.ResolvedStages();
  add_block(trunk_[0]);
  for (int s = 1; s <= stages; ++s) {
    add_block(trunk_[2 * s - 1]);
    if (s <= spec_.levels) {
      const auto& j = junctions_[s - 1];
      rows.push_back({"wavelet" + std::to_string(s), LayerKind::kWavelet,
                      filters_.name + " level " + std::to_string(s) + " -> " +
                          std::to_string(spec_.SubbandChannels(s)) + "x" +
                          std::to_string(j.height) + "x" + std::to_string(j.width),
                      0});
      add_block(projections_[s - 1]);
    }
    add_block(trunk_[2 * s]);
  }
  rows.push_back({"energy", LayerKind::kEnergy, "global average", 0});
  for (const auto& d : head_) {
    rows.push_back({d.name, LayerKind::kLinear,
                    "linear " + std::to_string(d.weight.dim(1)) + "->" +
                        std::to_string(d.weight.dim(0)),
                    d.weight.size() + d.bias.size()});
  }
  return rows;
}

std::vector<Tensor> Network::WaveletInputs(const Tensor& batch) const {
  const int n = batch.dim(0);
  const int c = spec_.input_shape[0];
  const int h = spec_.input_shape[1];
  const int w = spec_.input_shape[2];
  const std::size_t image_size = static_cast<std::size_t>(c) * h * w;
  std::vector<Tensor> out;
  for (int l = 1; l <= spec_.levels; ++l) {
    out.emplace_back(Shape{n, spec_.SubbandChannels(l), h >> l, w >> l});
  }
  for (int b = 0; b < n; ++b) {
    Tensor image({c, h, w},
                 std::vector<float>(batch.data().begin() + b * image_size,
                                    batch.data().begin() + (b + 1) * image_size));
    const MraDecomposition mra = Decompose(image, filters_, spec_.levels);
    for (int l = 1; l <= spec_.levels; ++l) {
      const Subbands& sb = mra.levels[l - 1];
      std::vector<const Tensor*> bands;
      if (spec_.subband_mode == SubbandMode::kAll || l == spec_.levels) {
        bands.push_back(&sb.ll);
      }
      bands.insert(bands.end(), {&sb.lh, &sb.hl, &sb.hh});
      Tensor& dst = out[l - 1];
      const std::size_t per_sample = dst.size() / n;
      float* p = dst.data().data() + b * per_sample;
      for (const Tensor* t : bands) p = std::copy(t->data().begin(), t->data().end(), p);
    }
  }
  return out;
}

Var Network::Block(Graph& g, ConvBlock& block, Var x) const {
  Var y = Conv2d(g, x, g.Parameter(block.weight), g.Parameter(block.bias),
                 block.stride, 1);
  y = BatchNorm(g, y, g.Parameter(block.gamma), g.Parameter(block.beta),
                {&block.running_mean, &block.running_var});
  return Relu(g, y);
}

Var Network::Forward(Graph& g, const Tensor& batch) {
  if (batch.rank() != 4 ||
      Shape(batch.shape().begin() + 1, batch.shape().end()) != spec_.input_shape) {
    throw ShapeError("network expects [N," +
                     ShapeToString(spec_.input_shape).substr(1) + " input, got " +
                     ShapeToString(batch.shape()));
  }
  std::vector<Tensor> bands = WaveletInputs(batch);
  Var h = Block(g, trunk_[0], g.Constant(batch));
  const int stages = spec_.ResolvedStages();
  for (int s = 1; s <= stages; ++s) {
    h = Block(g, trunk_[2 * s - 1], h);
    if (s <= spec_.levels) {
      Var p = Block(g, projections_[s - 1], g.Constant(std::move(bands[s - 1])));
      const Var parts[] = {h, p};
      h = ConcatChannels(g, parts);
    }
    h = Block(g, trunk_[2 * s], h);
  }
  h = Energy(g, h);
  for (auto& d : head_) {
    h = Linear(g, h, g.Parameter(d.weight), g.Parameter(d.bias));
    if (d.relu) h = Relu(g, h);
  }
  return h;
}

Tensor Network::Predict(const Tensor& batch) const {
  // Inference mode reads parameters and running statistics without writing.
  Graph g(Mode::kInference);
  return g.value(const_cast<Network*>(this)->Forward(g, batch));
}

void Network::ZeroGrad() {
  for (auto& p : Parameters()) p.tensor->ZeroGrad();
}

ParamCount CountParams(const Network& net) {
  ParamCount count;
  count.layers = net.Layers();
  for (const auto& row : count.layers) count.total += row.params;
  return count;
}

}  // namespace wcnn
