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

#include <cblas.h>
#include <omp.h>

#include <algorithm>
#include <cstddef>
#include <cstring>
#include <memory>
#include <mutex>

#include "kernel_ranges.h"
#include "wcnn/kernels.h"

// Convolutions lower to im2col + single-threaded SGEMM. OpenMP splits work
// into units that are fixed by the problem shape (one sample, or a fixed
// block of output channels), so every output element is produced by the
// same sequence of operations whatever the thread count.

namespace wcnn::kernels {
namespace {

constexpr int kWeightRowBlock = 16;

void SingleThreadedBlas() {
  static std::once_flag once;
  std::call_once(once, [] { openblas_set_num_threads(1); });
}

// Uninitialized per-thread scratch; grows monotonically.
float* ThreadBuffer(int slot, std::size_t size) {
  struct Buffer {
    std::unique_ptr<float[]> data;
    std::size_t size = 0;
  };
  thread_local Buffer buffers[2];
  Buffer& b = buffers[slot];
  if (b.size < size) {
    b.data.reset(new float[size]);
    b.size = size;
  }
  return b.data.get();
}

// col[(c*kh + u)*kw + v][i*out_w + j] for one sample, leading dimension ld.
void Im2Col(const ConvGeometry& g, const float* in, float* col, std::ptrdiff_t ld) {
  const int out_h = g.out_height();
  const int out_w = g.out_width();
  const int s = g.stride;
  const std::ptrdiff_t in_plane = std::ptrdiff_t{g.in_height} * g.in_width;
  for (int c = 0; c < g.in_channels; ++c) {
    for (int u = 0; u < g.kernel_height; ++u) {
      const auto rows = ValidRange(g.pad_top, u, s, g.in_height, out_h);
      for (int v = 0; v < g.kernel_width; ++v) {
        const auto cols = ValidRange(g.pad_left, v, s, g.in_width, out_w);
        float* dst = col + ((std::ptrdiff_t{c} * g.kernel_height + u) * g.kernel_width + v) * ld;
        std::fill(dst, dst + std::ptrdiff_t{rows.begin} * out_w, 0.0f);
        for (int i = rows.begin; i < rows.end; ++i) {
          float* out_row = dst + std::ptrdiff_t{i} * out_w;
          const float* in_row = in + c * in_plane +
                                std::ptrdiff_t{i * s + u - g.pad_top} * g.in_width +
                                (v - g.pad_left);
          std::fill(out_row, out_row + cols.begin, 0.0f);
          if (s == 1) {
            std::memcpy(out_row + cols.begin, in_row + cols.begin,
                        sizeof(float) * (cols.end - cols.begin));
          } else {
            for (int j = cols.begin; j < cols.end; ++j) out_row[j] = in_row[j * s];
          }
          std::fill(out_row + cols.end, out_row + out_w, 0.0f);
        }
        std::fill(dst + std::ptrdiff_t{rows.end} * out_w, dst + std::ptrdiff_t{out_h} * out_w,
                  0.0f);
      }
    }
  }
}

// Adjoint of Im2Col: scatter-add col back into one sample's input gradient.
void Col2Im(const ConvGeometry& g, const float* col, float* din) {
  const int out_h = g.out_height();
  const int out_w = g.out_width();
  const int s = g.stride;
  const std::ptrdiff_t in_plane = std::ptrdiff_t{g.in_height} * g.in_width;
  const std::ptrdiff_t ld = std::ptrdiff_t{out_h} * out_w;
  for (int c = 0; c < g.in_channels; ++c) {
    for (int u = 0; u < g.kernel_height; ++u) {
      const auto rows = ValidRange(g.pad_top, u, s, g.in_height, out_h);
      for (int v = 0; v < g.kernel_width; ++v) {
        const auto cols = ValidRange(g.pad_left, v, s, g.in_width, out_w);
        const float* src =
            col + ((std::ptrdiff_t{c} * g.kernel_height + u) * g.kernel_width + v) * ld;
        for (int i = rows.begin; i < rows.end; ++i) {
          const float* src_row = src + std::ptrdiff_t{i} * out_w;
          float* din_row = din + c * in_plane +
                           std::ptrdiff_t{i * s + u - g.pad_top} * g.in_width +
                           (v - g.pad_left);
          if (s == 1) {
#pragma omp simd
            for (int j = cols.begin; j < cols.end; ++j) din_row[j] += src_row[j];
          } else {
            for (int j = cols.begin; j < cols.end; ++j) din_row[j * s] += src_row[j];
          }
        }
      }
    }
  }
}

}  // namespace

void Conv2dForward(const ConvGeometry& g, std::span<const float> x,
                   std::span<const float> w, std::span<const float> bias,
                   std::span<float> y) {
  SingleThreadedBlas();
  const int k = g.in_channels * g.kernel_height * g.kernel_width;
  const std::ptrdiff_t p = std::ptrdiff_t{g.out_height()} * g.out_width();
  const std::ptrdiff_t in_size = std::ptrdiff_t{g.in_channels} * g.in_height * g.in_width;

#pragma omp parallel for schedule(static)
  for (int n = 0; n < g.batch; ++n) {
    float* col = ThreadBuffer(0, k * p);
    Im2Col(g, x.data() + n * in_size, col, p);
    float* out = y.data() + n * g.out_channels * p;
    for (int o = 0; o < g.out_channels; ++o) {
      std::fill(out + o * p, out + (o + 1) * p, bias.empty() ? 0.0f : bias[o]);
    }
    cblas_sgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, g.out_channels, static_cast<int>(p),
                k, 1.0f, w.data(), k, col, static_cast<int>(p), 1.0f, out,
                static_cast<int>(p));
  }
}

void Conv2dBackwardInput(const ConvGeometry& g, std::span<const float> w,
                         std::span<const float> dy, std::span<float> dx) {
  SingleThreadedBlas();
  const int k = g.in_channels * g.kernel_height * g.kernel_width;
  const std::ptrdiff_t p = std::ptrdiff_t{g.out_height()} * g.out_width();
  const std::ptrdiff_t in_size = std::ptrdiff_t{g.in_channels} * g.in_height * g.in_width;

#pragma omp parallel for schedule(static)
  for (int n = 0; n < g.batch; ++n) {
    float* dcol = ThreadBuffer(0, k * p);
    cblas_sgemm(CblasRowMajor, CblasTrans, CblasNoTrans, k, static_cast<int>(p),
                g.out_channels, 1.0f, w.data(), k, dy.data() + n * g.out_channels * p,
                static_cast<int>(p), 0.0f, dcol, static_cast<int>(p));
    Col2Im(g, dcol, dx.data() + n * in_size);
  }
}

void Conv2dBackwardWeight(const ConvGeometry& g, std::span<const float> x,
                          std::span<const float> dy, std::span<float> dw,
                          std::span<float> db) {
  SingleThreadedBlas();
  const int k = g.in_channels * g.kernel_height * g.kernel_width;
  const std::ptrdiff_t p = std::ptrdiff_t{g.out_height()} * g.out_width();
  const std::ptrdiff_t np = p * g.batch;
  const std::ptrdiff_t in_size = std::ptrdiff_t{g.in_channels} * g.in_height * g.in_width;

  // Columns of every sample side by side: [k, batch * p].
  float* col_data = ThreadBuffer(0, k * np);
  // dy regrouped channel-major: [out_channels, batch * p].
  float* dyt_data = ThreadBuffer(1, g.out_channels * np);

#pragma omp parallel for schedule(static)
  for (int n = 0; n < g.batch; ++n) {
    Im2Col(g, x.data() + n * in_size, col_data + n * p, np);
    for (int o = 0; o < g.out_channels; ++o) {
      std::memcpy(dyt_data + o * np + n * p, dy.data() + (std::ptrdiff_t{n} * g.out_channels + o) * p,
                  sizeof(float) * p);
    }
  }

  const int blocks = (g.out_channels + kWeightRowBlock - 1) / kWeightRowBlock;
#pragma omp parallel for schedule(static)
  for (int b = 0; b < blocks; ++b) {
    const int o0 = b * kWeightRowBlock;
    const int rows = std::min(kWeightRowBlock, g.out_channels - o0);
    cblas_sgemm(CblasRowMajor, CblasNoTrans, CblasTrans, rows, k, static_cast<int>(np), 1.0f,
                dyt_data + o0 * np, static_cast<int>(np), col_data, static_cast<int>(np), 1.0f,
                dw.data() + std::ptrdiff_t{o0} * k, k);
    if (!db.empty()) {
      for (int o = o0; o < o0 + rows; ++o) {
        const float* d = dyt_data + o * np;
        float acc = 0.0f;
#pragma omp simd reduction(+ : acc)
        for (std::ptrdiff_t i = 0; i < np; ++i) acc += d[i];
        db[o] += acc;
      }
    }
  }
}

int MaxThreads() { return omp_get_max_threads(); }

void SetMaxThreads(int threads) {
  if (threads >= 1) omp_set_num_threads(threads);
}

}  // namespace wcnn::kernels
