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

#ifndef WCNN_NETWORK_H_
#define WCNN_NETWORK_H_

#include <cstddef>
#include <string>
#include <vector>

#include "wcnn/autograd.h"
#include "wcnn/tensor.h"
#include "wcnn/wavelet.h"

namespace wcnn {

// Which subbands of each decomposition level enter the trunk.
//   kAll:        LL, LH, HL, HH at every level.
//   kDetailOnly: LH, HL, HH at every level, plus LL at the deepest level so
//                the injected representation stays invertible.
enum class SubbandMode { kAll, kDetailOnly };

std::string ToString(SubbandMode mode);
// Accepts "all" and "detail-only".
SubbandMode ParseSubbandMode(const std::string& text);

inline constexpr int kMaxLevels = 5;

struct NetworkSpec {
  Shape input_shape{3, 64, 64};
  int levels = 3;
  // Stride-2 stages in the trunk; 0 selects max(levels, min(4, t)) where t
  // counts how often the input extents halve evenly.
  int stages = 0;
  int base_channels = 32;
  int num_classes = 4;
  SubbandMode subband_mode = SubbandMode::kAll;
  // Output channels of stage 0..stages; empty selects the default schedule.
  std::vector<int> stage_channels;

  int ResolvedStages() const;
  std::vector<int> ResolvedStageChannels() const;
  int HeadWidth() const { return 4 * base_channels; }
  // Channels injected by the wavelet branch at `level` (1-based).
  int SubbandChannels(int level) const;

  // Throws BuildError naming the violated constraint.
  void Validate() const;

  friend bool operator==(const NetworkSpec&, const NetworkSpec&) = default;
};

// base * 2^floor(s / 2) for s = 0..stages.
std::vector<int> DefaultStageChannels(int base_channels, int stages);

// conv3x3 -> batch norm -> ReLU.
struct ConvBlock {
  std::string name;
  int stride = 1;
  Tensor weight;  // [out, in, 3, 3]
  Tensor bias;    // [out]
  Tensor gamma;   // [out]
  Tensor beta;    // [out]
  Tensor running_mean;
  Tensor running_var;
};

struct DenseLayer {
  std::string name;
  Tensor weight;  // [out, in]
  Tensor bias;    // [out]
  bool relu = true;
};

enum class LayerKind { kConv, kBatchNorm, kWavelet, kEnergy, kLinear };

struct LayerInfo {
  std::string name;
  LayerKind kind;
  std::string description;
  std::size_t params = 0;
};

std::string ToString(LayerKind kind);

// Point where the level-`stage` subbands meet the trunk.
struct Junction {
  int stage = 0;
  int height = 0;
  int width = 0;
  int trunk_channels = 0;
  // Width of the projected subbands concatenated after the trunk.
  int subband_channels = 0;
};

struct NamedTensor {
  std::string name;
  Tensor* tensor = nullptr;
};

struct NamedConstTensor {
  std::string name;
  const Tensor* tensor = nullptr;
};

// Wavelet CNN: a stride-2 convolutional trunk into which the multiresolution
// subbands of the input are concatenated at matching resolutions, followed by
// an energy layer and three fully connected layers.
//
// Trunk layout for S stages and L levels:
//   conv0 (stride 1)
//   for s = 1..S:
//     conv{s}a (stride 2)
//     if s <= L: proj{s}(wavelet level s) concatenated after the trunk
//     conv{s}b (stride 1)
//   energy -> fc1 -> fc2 -> fc3
//
// Weights start at zero (batch-norm scales at one); see HeInit.
class Network {
 public:
  explicit Network(const NetworkSpec& spec);

  const NetworkSpec& spec() const { return spec_; }
  const WaveletFilterPair& filters() const { return filters_; }

  // Trainable tensors in registration order; each appears exactly once.
  std::vector<NamedTensor> Parameters();
  std::vector<NamedConstTensor> Parameters() const;
  // Batch-norm running statistics.
  std::vector<NamedTensor> Buffers();
  std::vector<NamedConstTensor> Buffers() const;

  std::vector<LayerInfo> Layers() const;
  const std::vector<Junction>& junctions() const { return junctions_; }

  const std::vector<ConvBlock>& trunk() const { return trunk_; }
  const std::vector<ConvBlock>& projections() const { return projections_; }
  const std::vector<DenseLayer>& head() const { return head_; }
  std::vector<ConvBlock>& trunk() { return trunk_; }
  std::vector<ConvBlock>& projections() { return projections_; }
  std::vector<DenseLayer>& head() { return head_; }

  // Subband tensors fed to the trunk, one [N, SubbandChannels(l), h, w]
  // tensor per level, channel order band-major (LL, LH, HL, HH).
  std::vector<Tensor> WaveletInputs(const Tensor& batch) const;

  // batch: [N, C, H, W] with [C, H, W] == spec().input_shape. Returns the
  // logits variable, [N, num_classes]. In training mode batch-norm running
  // statistics are updated.
  Var Forward(Graph& g, const Tensor& batch);
  // Inference-mode logits.
  Tensor Predict(const Tensor& batch) const;

  void ZeroGrad();

 private:
  Var Block(Graph& g, ConvBlock& block, Var x) const;

  NetworkSpec spec_;
  WaveletFilterPair filters_;
  std::vector<ConvBlock> trunk_;
  std::vector<ConvBlock> projections_;
  std::vector<DenseLayer> head_;
  std::vector<Junction> junctions_;
};

struct ParamCount {
  std::vector<LayerInfo> layers;
  std::size_t total = 0;
};

ParamCount CountParams(const Network& net);

}  // namespace wcnn

#endif  // WCNN_NETWORK_H_
