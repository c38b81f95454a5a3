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

#ifndef WCNN_OPS_H_
#define WCNN_OPS_H_

#include <span>
#include <vector>

#include "wcnn/tensor.h"

// Eager (non-recording) tensor operations. The recorded versions in
// autograd.h share these forward implementations.
namespace wcnn {

struct Padding {
  int top = 0;
  int bottom = 0;
  int left = 0;
  int right = 0;

  static Padding Symmetric(int pad) { return {pad, pad, pad, pad}; }
};

// Cross-correlation (no kernel flip) with zero padding.
//   x: [C_in, H, W] or [N, C_in, H, W]
//   w: [C_out, C_in, kH, kW]
//   bias: [C_out] or empty
// The result has the same rank as x.
Tensor Conv2d(const Tensor& x, const Tensor& w, const Tensor& bias,
              int stride, int pad);
Tensor Conv2d(const Tensor& x, const Tensor& w, const Tensor& bias,
              int stride, const Padding& pad);

// Keeps every p-th sample, starting at 0, along the last two axes.
Tensor Downsample(const Tensor& x, int p);

// Mean over non-overlapping p x p blocks of the last two axes.
Tensor AvgPool(const Tensor& x, int p);

// Generalized convolution-pooling y = (x * k) downsampled by p. The
// convolution runs at stride 1 with kH-1 / kW-1 trailing zeros so that its
// output keeps the input extent before downsampling.
Tensor ConvPool(const Tensor& x, const Tensor& w, const Tensor& bias, int p);

// Channel-diagonal [C, C, p, p] kernel with every tap 1/p^2; ConvPool with
// it reproduces AvgPool.
Tensor UniformKernel(int channels, int p);

Tensor Relu(const Tensor& x);

// x: [n] or [N, n]; w: [m, n]; b: [m].
Tensor Linear(const Tensor& x, const Tensor& w, const Tensor& b);

// Energy layer: [N, C, H, W] -> [N, C], mean over each feature map.
Tensor Energy(const Tensor& x);

// Concatenates [N, C_i, H, W] tensors along the channel axis.
Tensor ConcatChannels(std::span<const Tensor* const> parts);

// Mean over the batch of -log softmax(logits)[label]. logits: [N, K].
float SoftmaxCrossEntropy(const Tensor& logits, std::span<const int> labels);

// Running statistics owned by a batch-normalization layer.
struct BatchNormStats {
  Tensor* running_mean = nullptr;
  Tensor* running_var = nullptr;
  float momentum = 0.9f;
  float eps = 1e-5f;
};

// Per-channel normalization of [N, C] or [N, C, H, W]. In training mode
// batch statistics are used and the running averages are updated; in
// inference mode the running averages are used.
Tensor BatchNorm(const Tensor& x, const Tensor& gamma, const Tensor& beta,
                 const BatchNormStats& stats, bool training);

}  // namespace wcnn

#endif  // WCNN_OPS_H_
