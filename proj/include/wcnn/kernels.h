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

#ifndef WCNN_KERNELS_H_
#define WCNN_KERNELS_H_

#include <span>

namespace wcnn::kernels {

// Geometry of a batched 2D cross-correlation. Padding may be asymmetric;
// padded samples are zero.
struct ConvGeometry {
  int batch = 1;
  int in_channels = 1;
  int in_height = 1;
  int in_width = 1;
  int out_channels = 1;
  int kernel_height = 1;
  int kernel_width = 1;
  int stride = 1;
  int pad_top = 0;
  int pad_left = 0;
  int pad_bottom = 0;
  int pad_right = 0;

  int out_height() const {
    return (in_height + pad_top + pad_bottom - kernel_height) / stride + 1;
  }
  int out_width() const {
    return (in_width + pad_left + pad_right - kernel_width) / stride + 1;
  }
};

// OpenMP kernels. Each output element is owned by exactly one thread and
// accumulated in a fixed order, so results do not depend on thread count.
//
// x: [batch, in_channels, in_height, in_width]
// w: [out_channels, in_channels, kernel_height, kernel_width]
// y: [batch, out_channels, out_height, out_width] (overwritten)
void Conv2dForward(const ConvGeometry& g, std::span<const float> x,
                   std::span<const float> w, std::span<const float> bias,
                   std::span<float> y);
// dx += conv2d^T(dy)
void Conv2dBackwardInput(const ConvGeometry& g, std::span<const float> w,
                         std::span<const float> dy, std::span<float> dx);
// dw += correlation of x with dy; db += sum of dy. db may be empty.
void Conv2dBackwardWeight(const ConvGeometry& g, std::span<const float> x,
                          std::span<const float> dy, std::span<float> dw,
                          std::span<float> db);

// Returns the thread count used by the parallel kernels.
int MaxThreads();
// Caps the thread count; values < 1 are ignored.
void SetMaxThreads(int threads);

namespace reference {

// Serial direct-summation versions of the kernels above. Kept as the test
// oracle and the benchmark baseline.
void Conv2dForward(const ConvGeometry& g, std::span<const float> x,
                   std::span<const float> w, std::span<const float> bias,
                   std::span<float> y);
void Conv2dBackwardInput(const ConvGeometry& g, std::span<const float> w,
                         std::span<const float> dy, std::span<float> dx);
void Conv2dBackwardWeight(const ConvGeometry& g, std::span<const float> x,
                          std::span<const float> dy, std::span<float> dw,
                          std::span<float> db);

}  // namespace reference
}  // namespace wcnn::kernels

#endif  // WCNN_KERNELS_H_
