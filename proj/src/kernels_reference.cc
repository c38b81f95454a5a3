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

#include <cstddef>

#include "wcnn/kernels.h"

namespace wcnn::kernels::reference {
namespace {

// Flat offsets into NCHW / OIHW buffers.
std::size_t At(int a, int b, int c, int d, int nb, int nc, int nd) {
  return ((static_cast<std::size_t>(a) * nb + b) * nc + c) * nd + d;
}

// Input coordinate for output index i and tap u, or -1 when it falls in the
// zero padding.
int Tap(int i, int u, int stride, int pad, int extent) {
  const int p = i * stride + u - pad;
  return (p < 0 || p >= extent) ? -1 : p;
}

}  // namespace

void Conv2dForward(const ConvGeometry& g, std::span<const float> x,
                   std::span<const float> w, std::span<const float> bias,
                   std::span<float> y) {
  const int oh = g.out_height();
  const int ow = g.out_width();
  for (int n = 0; n < g.batch; ++n) {
    for (int o = 0; o < g.out_channels; ++o) {
      for (int i = 0; i < oh; ++i) {
        for (int j = 0; j < ow; ++j) {
          double acc = bias.empty() ? 0.0 : bias[o];
          for (int c = 0; c < g.in_channels; ++c) {
            for (int u = 0; u < g.kernel_height; ++u) {
              const int r = Tap(i, u, g.stride, g.pad_top, g.in_height);
              if (r < 0) continue;
              for (int v = 0; v < g.kernel_width; ++v) {
                const int q = Tap(j, v, g.stride, g.pad_left, g.in_width);
                if (q < 0) continue;
                acc += double{w[At(o, c, u, v, g.in_channels, g.kernel_height,
                                   g.kernel_width)]} *
                       x[At(n, c, r, q, g.in_channels, g.in_height, g.in_width)];
              }
            }
          }
          y[At(n, o, i, j, g.out_channels, oh, ow)] = static_cast<float>(acc);
        }
      }
    }
  }
}

void Conv2dBackwardInput(const ConvGeometry& g, std::span<const float> w,
                         std::span<const float> dy, std::span<float> dx) {
  const int oh = g.out_height();
  const int ow = g.out_width();
  for (int n = 0; n < g.batch; ++n) {
    for (int o = 0; o < g.out_channels; ++o) {
      for (int i = 0; i < oh; ++i) {
        for (int j = 0; j < ow; ++j) {
          const float d = dy[At(n, o, i, j, g.out_channels, oh, ow)];
          for (int c = 0; c < g.in_channels; ++c) {
            for (int u = 0; u < g.kernel_height; ++u) {
              const int r = Tap(i, u, g.stride, g.pad_top, g.in_height);
              if (r < 0) continue;
              for (int v = 0; v < g.kernel_width; ++v) {
                const int q = Tap(j, v, g.stride, g.pad_left, g.in_width);
                if (q < 0) continue;
                dx[At(n, c, r, q, g.in_channels, g.in_height, g.in_width)] +=
                    w[At(o, c, u, v, g.in_channels, g.kernel_height,
                         g.kernel_width)] *
                    d;
              }
            }
          }
        }
      }
    }
  }
}

void Conv2dBackwardWeight(const ConvGeometry& g, std::span<const float> x,
                          std::span<const float> dy, std::span<float> dw,
                          std::span<float> db) {
  const int oh = g.out_height();
  const int ow = g.out_width();
  for (int o = 0; o < g.out_channels; ++o) {
    if (!db.empty()) {
      double acc = 0.0;
      for (int n = 0; n < g.batch; ++n) {
        for (int i = 0; i < oh; ++i) {
          for (int j = 0; j < ow; ++j) {
            acc += dy[At(n, o, i, j, g.out_channels, oh, ow)];
          }
        }
      }
      db[o] += static_cast<float>(acc);
    }
    for (int c = 0; c < g.in_channels; ++c) {
      for (int u = 0; u < g.kernel_height; ++u) {
        for (int v = 0; v < g.kernel_width; ++v) {
          double acc = 0.0;
          for (int n = 0; n < g.batch; ++n) {
            for (int i = 0; i < oh; ++i) {
              const int r = Tap(i, u, g.stride, g.pad_top, g.in_height);
              if (r < 0) continue;
              for (int j = 0; j < ow; ++j) {
                const int q = Tap(j, v, g.stride, g.pad_left, g.in_width);
                if (q < 0) continue;
                acc += double{dy[At(n, o, i, j, g.out_channels, oh, ow)]} *
                       x[At(n, c, r, q, g.in_channels, g.in_height, g.in_width)];
              }
            }
          }
          dw[At(o, c, u, v, g.in_channels, g.kernel_height, g.kernel_width)] +=
              static_cast<float>(acc);
        }
      }
    }
  }
}

}  // namespace wcnn::kernels::reference
