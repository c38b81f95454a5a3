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

#include "wcnn/ops.h"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "wcnn/error.h"
#include "ops_detail.h"
#include "wcnn/kernels.h"

namespace wcnn {
namespace {

void CheckSpatialRank(const Tensor& x, const char* op) {
  if (x.rank() < 2) {
    throw ShapeError(std::string(op) + ": need at least 2 axes, got " +
                     ShapeToString(x.shape()));
  }
}

}  // namespace

namespace detail {

kernels::ConvGeometry ConvGeometryFor(const Shape& x, const Shape& w,
                                      std::size_t bias_size, int stride,
                                      const Padding& pad) {
  if (x.size() != 3 && x.size() != 4) {
    throw ShapeError("conv2d: input must be [C,H,W] or [N,C,H,W], got " +
                     ShapeToString(x));
  }
  if (w.size() != 4) {
    throw ShapeError("conv2d: weight must be [C_out,C_in,kH,kW], got " +
                     ShapeToString(w));
  }
  if (stride <= 0) {
    throw ArgumentError("conv2d: stride must be positive, got " +
                        std::to_string(stride));
  }
  if (pad.top < 0 || pad.bottom < 0 || pad.left < 0 || pad.right < 0) {
    throw ArgumentError("conv2d: padding must be non-negative");
  }
  const bool batched = x.size() == 4;
  kernels::ConvGeometry g;
  g.batch = batched ? x[0] : 1;
  g.in_channels = x[batched ? 1 : 0];
  g.in_height = x[batched ? 2 : 1];
  g.in_width = x[batched ? 3 : 2];
  g.out_channels = w[0];
  g.kernel_height = w[2];
  g.kernel_width = w[3];
  g.stride = stride;
  g.pad_top = pad.top;
  g.pad_bottom = pad.bottom;
  g.pad_left = pad.left;
  g.pad_right = pad.right;
  if (w[1] != g.in_channels) {
    throw ShapeError("conv2d: input has " + std::to_string(g.in_channels) +
                     " channels but weight " + ShapeToString(w) + " expects " +
                     std::to_string(w[1]));
  }
  if (bias_size != 0 && bias_size != static_cast<std::size_t>(g.out_channels)) {
    throw ShapeError("conv2d: bias has " + std::to_string(bias_size) +
                     " elements, expected " + std::to_string(g.out_channels));
  }
  if (g.kernel_height < 1 || g.kernel_width < 1 ||
      g.in_height + pad.top + pad.bottom < g.kernel_height ||
      g.in_width + pad.left + pad.right < g.kernel_width) {
    throw ShapeError("conv2d: kernel " + ShapeToString(w) +
                     " larger than padded input " + ShapeToString(x));
  }
  return g;
}

Shape ConvOutputShape(const Shape& x, const kernels::ConvGeometry& g) {
  if (x.size() == 4) return {g.batch, g.out_channels, g.out_height(), g.out_width()};
  return {g.out_channels, g.out_height(), g.out_width()};
}

}  // namespace detail

Tensor Conv2d(const Tensor& x, const Tensor& w, const Tensor& bias,
              int stride, int pad) {
  if (pad < 0) throw ArgumentError("conv2d: padding must be non-negative");
  return Conv2d(x, w, bias, stride, Padding::Symmetric(pad));
}

Tensor Conv2d(const Tensor& x, const Tensor& w, const Tensor& bias,
              int stride, const Padding& pad) {
  const auto g = detail::ConvGeometryFor(x.shape(), w.shape(), bias.size(),
                                         stride, pad);
  Tensor y(detail::ConvOutputShape(x.shape(), g));
  kernels::Conv2dForward(g, x.data(), w.data(), bias.data(), y.data());
  return y;
}

Tensor Downsample(const Tensor& x, int p) {
  CheckSpatialRank(x, "downsample");
  if (p <= 0) throw ArgumentError("downsample: factor must be positive");
  const int h = x.dim(-2);
  const int w = x.dim(-1);
  if (h % p != 0 || w % p != 0) {
    throw ArgumentError("downsample: extent " + ShapeToString(x.shape()) +
                        " not divisible by " + std::to_string(p));
  }
  Shape out_shape = x.shape();
  out_shape[out_shape.size() - 2] = h / p;
  out_shape[out_shape.size() - 1] = w / p;
  Tensor y(out_shape);
  const std::size_t planes = x.size() / (static_cast<std::size_t>(h) * w);
  const int oh = h / p;
  const int ow = w / p;
  for (std::size_t k = 0; k < planes; ++k) {
    const float* in = x.data().data() + k * h * w;
    float* out = y.data().data() + k * oh * ow;
    for (int i = 0; i < oh; ++i) {
      for (int j = 0; j < ow; ++j) out[i * ow + j] = in[i * p * w + j * p];
    }
  }
  return y;
}

Tensor AvgPool(const Tensor& x, int p) {
  CheckSpatialRank(x, "avg_pool");
  if (p <= 0) throw ArgumentError("avg_pool: support must be positive");
  const int h = x.dim(-2);
  const int w = x.dim(-1);
  if (h % p != 0 || w % p != 0) {
    throw ArgumentError("avg_pool: extent " + ShapeToString(x.shape()) +
                        " not divisible by " + std::to_string(p));
  }
  Shape out_shape = x.shape();
  out_shape[out_shape.size() - 2] = h / p;
  out_shape[out_shape.size() - 1] = w / p;
  Tensor y(out_shape);
  const std::size_t planes = x.size() / (static_cast<std::size_t>(h) * w);
  const int oh = h / p;
  const int ow = w / p;
  const float scale = 1.0f / static_cast<float>(p * p);
  for (std::size_t k = 0; k < planes; ++k) {
    const float* in = x.data().data() + k * h * w;
    float* out = y.data().data() + k * oh * ow;
    for (int i = 0; i < oh; ++i) {
      for (int j = 0; j < ow; ++j) {
        float acc = 0.0f;
        for (int a = 0; a < p; ++a) {
          for (int b = 0; b < p; ++b) acc += in[(i * p + a) * w + j * p + b];
        }
        out[i * ow + j] = acc * scale;
      }
    }
  }
  return y;
}

Tensor ConvPool(const Tensor& x, const Tensor& w, const Tensor& bias, int p) {
  if (w.rank() != 4) {
    throw ShapeError("conv_pool: weight must be [C_out,C_in,kH,kW]");
  }
  const Padding trailing{0, w.dim(2) - 1, 0, w.dim(3) - 1};
  return Downsample(Conv2d(x, w, bias, 1, trailing), p);
}

Tensor UniformKernel(int channels, int p) {
  if (channels <= 0 || p <= 0) {
    throw ArgumentError("uniform kernel: channels and support must be positive");
  }
  Tensor k({channels, channels, p, p});
  const float tap = 1.0f / static_cast<float>(p * p);
  for (int c = 0; c < channels; ++c) {
    for (int a = 0; a < p; ++a) {
      for (int b = 0; b < p; ++b) k.at({c, c, a, b}) = tap;
    }
  }
  return k;
}

Tensor Relu(const Tensor& x) {
  Tensor y = x;
  for (float& v : y.data()) v = v > 0.0f ? v : 0.0f;
  return y;
}

Tensor Linear(const Tensor& x, const Tensor& w, const Tensor& b) {
  if (w.rank() != 2) throw ShapeError("linear: weight must be [m,n]");
  const int m = w.dim(0);
  const int n = w.dim(1);
  if (b.rank() != 1 || b.dim(0) != m) {
    throw ShapeError("linear: bias must be [" + std::to_string(m) + "]");
  }
  const bool batched = x.rank() == 2;
  if ((x.rank() != 1 && !batched) || x.dim(-1) != n) {
    throw ShapeError("linear: input " + ShapeToString(x.shape()) +
                     " incompatible with weight " + ShapeToString(w.shape()));
  }
  const int rows = batched ? x.dim(0) : 1;
  Tensor y(batched ? Shape{rows, m} : Shape{m});
  for (int r = 0; r < rows; ++r) {
    const float* in = x.data().data() + static_cast<std::size_t>(r) * n;
    for (int i = 0; i < m; ++i) {
      const float* wr = w.data().data() + static_cast<std::size_t>(i) * n;
      float acc = 0.0f;
#pragma omp simd reduction(+ : acc)
      for (int k = 0; k < n; ++k) acc += wr[k] * in[k];
      y[static_cast<std::size_t>(r) * m + i] = acc + b[i];
    }
  }
  return y;
}

Tensor Energy(const Tensor& x) {
  if (x.rank() != 4) throw ShapeError("energy: input must be [N,C,H,W]");
  const int n = x.dim(0);
  const int c = x.dim(1);
  const std::size_t plane = static_cast<std::size_t>(x.dim(2)) * x.dim(3);
  Tensor y({n, c});
  for (std::size_t k = 0; k < y.size(); ++k) {
    const float* in = x.data().data() + k * plane;
    double acc = 0.0;
    for (std::size_t t = 0; t < plane; ++t) acc += in[t];
    y[k] = static_cast<float>(acc / static_cast<double>(plane));
  }
  return y;
}

Tensor ConcatChannels(std::span<const Tensor* const> parts) {
  if (parts.empty()) throw ArgumentError("concat: no inputs");
  const Tensor& first = *parts.front();
  if (first.rank() != 4) throw ShapeError("concat: inputs must be [N,C,H,W]");
  int channels = 0;
  for (const Tensor* t : parts) {
    if (t->rank() != 4 || t->dim(0) != first.dim(0) ||
        t->dim(2) != first.dim(2) || t->dim(3) != first.dim(3)) {
      throw ShapeError("concat: " + ShapeToString(t->shape()) +
                       " does not match " + ShapeToString(first.shape()));
    }
    channels += t->dim(1);
  }
  const int n = first.dim(0);
  const std::size_t plane = static_cast<std::size_t>(first.dim(2)) * first.dim(3);
  Tensor y({n, channels, first.dim(2), first.dim(3)});
  float* out = y.data().data();
  for (int b = 0; b < n; ++b) {
    for (const Tensor* t : parts) {
      const std::size_t block = t->dim(1) * plane;
      const float* in = t->data().data() + b * block;
      out = std::copy(in, in + block, out);
    }
  }
  return y;
}

float SoftmaxCrossEntropy(const Tensor& logits, std::span<const int> labels) {
  if (logits.rank() != 2) throw ShapeError("cross-entropy: logits must be [N,K]");
  const int n = logits.dim(0);
  const int k = logits.dim(1);
  if (static_cast<int>(labels.size()) != n) {
    throw ShapeError("cross-entropy: " + std::to_string(labels.size()) +
                     " labels for batch of " + std::to_string(n));
  }
  double total = 0.0;
  for (int b = 0; b < n; ++b) {
    if (labels[b] < 0 || labels[b] >= k) {
      throw ArgumentError("cross-entropy: label " + std::to_string(labels[b]) +
                          " outside [0," + std::to_string(k) + ")");
    }
    const float* row = logits.data().data() + static_cast<std::size_t>(b) * k;
    const double mx = *std::max_element(row, row + k);
    double z = 0.0;
    for (int c = 0; c < k; ++c) z += std::exp(row[c] - mx);
    total += std::log(z) + mx - row[labels[b]];
  }
  return static_cast<float>(total / n);
}

namespace detail {

Tensor BatchNormForward(const Tensor& x, const Tensor& gamma,
                        const Tensor& beta, const BatchNormStats& stats,
                        bool training, std::vector<float>* xhat,
                        std::vector<float>* inv_std) {
  if (x.rank() != 2 && x.rank() != 4) {
    throw ShapeError("batchnorm: input must be [N,C] or [N,C,H,W], got " +
                     ShapeToString(x.shape()));
  }
  const int n = x.dim(0);
  const int c = x.dim(1);
  const std::size_t plane =
      x.rank() == 4 ? static_cast<std::size_t>(x.dim(2)) * x.dim(3) : 1;
  if (gamma.size() != static_cast<std::size_t>(c) ||
      beta.size() != static_cast<std::size_t>(c)) {
    throw ShapeError("batchnorm: gamma/beta must have " + std::to_string(c) +
                     " elements");
  }
  if (stats.running_mean == nullptr || stats.running_var == nullptr ||
      stats.running_mean->size() != static_cast<std::size_t>(c) ||
      stats.running_var->size() != static_cast<std::size_t>(c)) {
    throw ShapeError("batchnorm: running statistics must have " +
                     std::to_string(c) + " elements");
  }
  if (training && n < 2) {
    throw ArgumentError(
        "batchnorm: training mode needs a batch of at least 2 (got " +
        std::to_string(n) + "); batch variance is degenerate");
  }
  const double count = static_cast<double>(n) * plane;
  Tensor y(x.shape());
  if (xhat) xhat->assign(x.size(), 0.0f);
  if (inv_std) inv_std->assign(c, 0.0f);
  const std::span<float> rm = stats.running_mean->data();
  const std::span<float> rv = stats.running_var->data();
  for (int ch = 0; ch < c; ++ch) {
    double mean;
    double var;
    if (training) {
      double sum = 0.0;
      for (int b = 0; b < n; ++b) {
        const float* in = x.data().data() + (static_cast<std::size_t>(b) * c + ch) * plane;
        for (std::size_t t = 0; t < plane; ++t) sum += in[t];
      }
      mean = sum / count;
      double sq = 0.0;
      for (int b = 0; b < n; ++b) {
        const float* in = x.data().data() + (static_cast<std::size_t>(b) * c + ch) * plane;
        for (std::size_t t = 0; t < plane; ++t) {
          const double d = in[t] - mean;
          sq += d * d;
        }
      }
      var = sq / count;
      const float m = stats.momentum;
      rm[ch] = static_cast<float>(m * rm[ch] + (1.0 - m) * mean);
      rv[ch] = static_cast<float>(m * rv[ch] + (1.0 - m) * var * count / (count - 1.0));
    } else {
      mean = rm[ch];
      var = rv[ch];
    }
    const float istd = static_cast<float>(1.0 / std::sqrt(var + stats.eps));
    const float mu = static_cast<float>(mean);
    if (inv_std) (*inv_std)[ch] = istd;
    for (int b = 0; b < n; ++b) {
      const std::size_t base = (static_cast<std::size_t>(b) * c + ch) * plane;
      for (std::size_t t = 0; t < plane; ++t) {
        const float h = (x[base + t] - mu) * istd;
        if (xhat) (*xhat)[base + t] = h;
        y[base + t] = gamma[ch] * h + beta[ch];
      }
    }
  }
  return y;
}

}  // namespace detail

Tensor BatchNorm(const Tensor& x, const Tensor& gamma, const Tensor& beta,
                 const BatchNormStats& stats, bool training) {
  return detail::BatchNormForward(x, gamma, beta, stats, training, nullptr,
                                  nullptr);
}

}  // namespace wcnn
