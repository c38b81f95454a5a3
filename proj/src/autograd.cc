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

#include "wcnn/autograd.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "ops_detail.h"
#include "wcnn/error.h"
#include "wcnn/kernels.h"

namespace wcnn {

const Graph::Node& Graph::node(Var v) const {
  if (v.id < 0 || v.id >= static_cast<int>(nodes_.size())) {
    throw ArgumentError("graph: invalid variable handle " + std::to_string(v.id));
  }
  return nodes_[v.id];
}

Graph::Node& Graph::node(Var v) {
  return const_cast<Node&>(static_cast<const Graph&>(*this).node(v));
}

Var Graph::Constant(Tensor value) {
  Node n;
  n.owned = std::move(value);
  nodes_.push_back(std::move(n));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

Var Graph::Parameter(Tensor& param) {
  Node n;
  n.param = &param;
  n.requires_grad = training();
  nodes_.push_back(std::move(n));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

Var Graph::Record(Tensor value, std::initializer_list<Var> inputs,
                  BackwardFn fn) {
  return Record(std::move(value), std::span<const Var>(inputs.begin(), inputs.size()),
                std::move(fn));
}

Var Graph::Record(Tensor value, std::span<const Var> inputs, BackwardFn fn) {
  if (backward_done_) {
    throw StateError("graph: cannot record after backward; build a new graph");
  }
  Node n;
  n.owned = std::move(value);
  if (training()) {
    n.requires_grad = std::any_of(inputs.begin(), inputs.end(),
                                  [this](Var v) { return requires_grad(v); });
  }
  if (n.requires_grad) n.backward = std::move(fn);
  nodes_.push_back(std::move(n));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

const Tensor& Graph::value(Var v) const {
  const Node& n = node(v);
  return n.param ? *n.param : n.owned;
}

bool Graph::requires_grad(Var v) const { return node(v).requires_grad; }

std::span<float> Graph::grad(Var v) {
  Node& n = node(v);
  if (n.param) return n.param->grad();
  if (n.grad.size() != n.owned.size()) n.grad.assign(n.owned.size(), 0.0f);
  return n.grad;
}

void Graph::Backward(Var loss) {
  if (!training()) {
    throw StateError("graph: backward requires a training-mode forward pass");
  }
  if (backward_done_) {
    throw StateError("graph: backward already ran on this graph; re-run forward");
  }
  if (value(loss).size() != 1) {
    throw ShapeError("graph: backward needs a scalar loss, got " +
                     ShapeToString(value(loss).shape()));
  }
  backward_done_ = true;
  if (!requires_grad(loss)) return;
  grad(loss)[0] = 1.0f;
  for (int id = loss.id; id >= 0; --id) {
    Node& n = nodes_[id];
    if (!n.requires_grad || !n.backward || n.grad.empty()) continue;
    backward_order_.push_back(id);
    n.backward(*this);
    // Saved state is no longer needed.
    n.backward = nullptr;
  }
}

Var Conv2d(Graph& g, Var x, Var w, Var bias, int stride, int pad) {
  if (pad < 0) throw ArgumentError("conv2d: padding must be non-negative");
  return Conv2d(g, x, w, bias, stride, Padding::Symmetric(pad));
}

Var Conv2d(Graph& g, Var x, Var w, Var bias, int stride, const Padding& pad) {
  const Tensor& xv = g.value(x);
  const Tensor& wv = g.value(w);
  const Tensor& bv = g.value(bias);
  auto geom = detail::ConvGeometryFor(xv.shape(), wv.shape(), bv.size(), stride, pad);
  Tensor y(detail::ConvOutputShape(xv.shape(), geom));
  kernels::Conv2dForward(geom, xv.data(), wv.data(), bv.data(), y.data());
  Var out{static_cast<int>(g.size())};
  return g.Record(std::move(y), {x, w, bias}, [=](Graph& gr) {
    const auto dy = gr.grad(out);
    if (gr.requires_grad(x)) {
      kernels::Conv2dBackwardInput(geom, gr.value(w).data(), dy, gr.grad(x));
    }
    const bool need_w = gr.requires_grad(w);
    const bool need_b = gr.requires_grad(bias) && !gr.value(bias).empty();
    if (need_w || need_b) {
      std::vector<float> scratch_w;
      std::span<float> dw;
      if (need_w) {
        dw = gr.grad(w);
      } else {
        scratch_w.assign(gr.value(w).size(), 0.0f);
        dw = scratch_w;
      }
      kernels::Conv2dBackwardWeight(geom, gr.value(x).data(), dy, dw,
                                    need_b ? gr.grad(bias) : std::span<float>());
    }
  });
}

Var Downsample(Graph& g, Var x, int p) {
  Tensor y = Downsample(g.value(x), p);
  Var out{static_cast<int>(g.size())};
  return g.Record(std::move(y), {x}, [=](Graph& gr) {
    const Tensor& xv = gr.value(x);
    const int h = xv.dim(-2);
    const int w = xv.dim(-1);
    const int oh = h / p;
    const int ow = w / p;
    const auto dy = gr.grad(out);
    auto dx = gr.grad(x);
    const std::size_t planes = xv.size() / (static_cast<std::size_t>(h) * w);
    for (std::size_t k = 0; k < planes; ++k) {
      for (int i = 0; i < oh; ++i) {
        for (int j = 0; j < ow; ++j) {
          dx[k * h * w + i * p * w + j * p] += dy[k * oh * ow + i * ow + j];
        }
      }
    }
  });
}

Var Relu(Graph& g, Var x) {
  Tensor y = Relu(g.value(x));
  Var out{static_cast<int>(g.size())};
  return g.Record(std::move(y), {x}, [=](Graph& gr) {
    const auto xv = gr.value(x).data();
    const auto dy = gr.grad(out);
    auto dx = gr.grad(x);
    for (std::size_t i = 0; i < dx.size(); ++i) {
      if (xv[i] > 0.0f) dx[i] += dy[i];
    }
  });
}

Var Linear(Graph& g, Var x, Var w, Var b) {
  Tensor y = Linear(g.value(x), g.value(w), g.value(b));
  Var out{static_cast<int>(g.size())};
  return g.Record(std::move(y), {x, w, b}, [=](Graph& gr) {
    const Tensor& xv = gr.value(x);
    const Tensor& wv = gr.value(w);
    const int m = wv.dim(0);
    const int n = wv.dim(1);
    const int rows = xv.rank() == 2 ? xv.dim(0) : 1;
    const auto dy = gr.grad(out);
    if (gr.requires_grad(x)) {
      auto dx = gr.grad(x);
      for (int r = 0; r < rows; ++r) {
        for (int i = 0; i < m; ++i) {
          const float d = dy[r * m + i];
          const float* wr = wv.data().data() + static_cast<std::size_t>(i) * n;
          float* dxr = dx.data() + static_cast<std::size_t>(r) * n;
          for (int k = 0; k < n; ++k) dxr[k] += d * wr[k];
        }
      }
    }
    if (gr.requires_grad(w)) {
      auto dw = gr.grad(w);
      for (int i = 0; i < m; ++i) {
        float* dwr = dw.data() + static_cast<std::size_t>(i) * n;
        for (int r = 0; r < rows; ++r) {
          const float d = dy[r * m + i];
          const float* xr = xv.data().data() + static_cast<std::size_t>(r) * n;
          for (int k = 0; k < n; ++k) dwr[k] += d * xr[k];
        }
      }
    }
    if (gr.requires_grad(b)) {
      auto db = gr.grad(b);
      for (int r = 0; r < rows; ++r) {
        for (int i = 0; i < m; ++i) db[i] += dy[r * m + i];
      }
    }
  });
}

Var Energy(Graph& g, Var x) {
  Tensor y = Energy(g.value(x));
  Var out{static_cast<int>(g.size())};
  return g.Record(std::move(y), {x}, [=](Graph& gr) {
    const Tensor& xv = gr.value(x);
    const std::size_t plane = static_cast<std::size_t>(xv.dim(2)) * xv.dim(3);
    const float scale = 1.0f / static_cast<float>(plane);
    const auto dy = gr.grad(out);
    auto dx = gr.grad(x);
    for (std::size_t k = 0; k < dy.size(); ++k) {
      const float d = dy[k] * scale;
      for (std::size_t t = 0; t < plane; ++t) dx[k * plane + t] += d;
    }
  });
}

Var ConcatChannels(Graph& g, std::span<const Var> parts) {
  std::vector<const Tensor*> values;
  values.reserve(parts.size());
  for (Var v : parts) values.push_back(&g.value(v));
  Tensor y = ConcatChannels(values);
  Var out{static_cast<int>(g.size())};
  std::vector<Var> inputs(parts.begin(), parts.end());
  return g.Record(std::move(y), parts, [=](Graph& gr) {
    const Tensor& first = gr.value(inputs.front());
    const int n = first.dim(0);
    const std::size_t plane = static_cast<std::size_t>(first.dim(2)) * first.dim(3);
    const auto dy = gr.grad(out);
    std::size_t offset = 0;
    for (int b = 0; b < n; ++b) {
      for (Var v : inputs) {
        const std::size_t block = gr.value(v).dim(1) * plane;
        if (gr.requires_grad(v)) {
          auto dx = gr.grad(v);
          for (std::size_t t = 0; t < block; ++t) dx[b * block + t] += dy[offset + t];
        }
        offset += block;
      }
    }
  });
}

Var BatchNorm(Graph& g, Var x, Var gamma, Var beta, const BatchNormStats& stats) {
  std::vector<float> xhat;
  std::vector<float> inv_std;
  Tensor y = detail::BatchNormForward(g.value(x), g.value(gamma), g.value(beta),
                                      stats, g.training(), &xhat, &inv_std);
  Var out{static_cast<int>(g.size())};
  return g.Record(std::move(y), {x, gamma, beta},
                  [=, xhat = std::move(xhat), inv_std = std::move(inv_std)](Graph& gr) {
    const Tensor& xv = gr.value(x);
    const int n = xv.dim(0);
    const int c = xv.dim(1);
    const std::size_t plane =
        xv.rank() == 4 ? static_cast<std::size_t>(xv.dim(2)) * xv.dim(3) : 1;
    const double count = static_cast<double>(n) * plane;
    const auto gm = gr.value(gamma).data();
    const auto dy = gr.grad(out);
    const bool need_x = gr.requires_grad(x);
    const bool need_gamma = gr.requires_grad(gamma);
    const bool need_beta = gr.requires_grad(beta);
    for (int ch = 0; ch < c; ++ch) {
      double sum_dy = 0.0;
      double sum_dy_xhat = 0.0;
      for (int b = 0; b < n; ++b) {
        const std::size_t base = (static_cast<std::size_t>(b) * c + ch) * plane;
        for (std::size_t t = 0; t < plane; ++t) {
          sum_dy += dy[base + t];
          sum_dy_xhat += double{dy[base + t]} * xhat[base + t];
        }
      }
      if (need_gamma) gr.grad(gamma)[ch] += static_cast<float>(sum_dy_xhat);
      if (need_beta) gr.grad(beta)[ch] += static_cast<float>(sum_dy);
      if (!need_x) continue;
      auto dx = gr.grad(x);
      const float scale = gm[ch] * inv_std[ch];
      const float mean_dy = static_cast<float>(sum_dy / count);
      const float mean_dy_xhat = static_cast<float>(sum_dy_xhat / count);
      for (int b = 0; b < n; ++b) {
        const std::size_t base = (static_cast<std::size_t>(b) * c + ch) * plane;
        for (std::size_t t = 0; t < plane; ++t) {
          dx[base + t] += scale * (dy[base + t] - mean_dy - xhat[base + t] * mean_dy_xhat);
        }
      }
    }
  });
}

Var SoftmaxCrossEntropy(Graph& g, Var logits, std::span<const int> labels) {
  const float loss = SoftmaxCrossEntropy(g.value(logits), labels);
  std::vector<int> saved(labels.begin(), labels.end());
  Var out{static_cast<int>(g.size())};
  return g.Record(Tensor({1}, {loss}), {logits}, [=](Graph& gr) {
    const Tensor& lv = gr.value(logits);
    const int n = lv.dim(0);
    const int k = lv.dim(1);
    const float scale = gr.grad(out)[0] / static_cast<float>(n);
    auto dl = gr.grad(logits);
    std::vector<double> p(k);
    for (int b = 0; b < n; ++b) {
      const float* row = lv.data().data() + static_cast<std::size_t>(b) * k;
      const double mx = *std::max_element(row, row + k);
      double z = 0.0;
      for (int c = 0; c < k; ++c) {
        p[c] = std::exp(row[c] - mx);
        z += p[c];
      }
      for (int c = 0; c < k; ++c) {
        const double target = c == saved[b] ? 1.0 : 0.0;
        dl[static_cast<std::size_t>(b) * k + c] +=
            static_cast<float>((p[c] / z - target) * scale);
      }
    }
  });
}

Var Mul(Graph& g, Var a, Var b) {
  const Tensor& av = g.value(a);
  const Tensor& bv = g.value(b);
  if (av.shape() != bv.shape()) {
    throw ShapeError("mul: " + ShapeToString(av.shape()) + " vs " +
                     ShapeToString(bv.shape()));
  }
  Tensor y = av;
  for (std::size_t i = 0; i < y.size(); ++i) y[i] *= bv[i];
  Var out{static_cast<int>(g.size())};
  return g.Record(std::move(y), {a, b}, [=](Graph& gr) {
    const auto dy = gr.grad(out);
    if (gr.requires_grad(a)) {
      auto da = gr.grad(a);
      const auto bd = gr.value(b).data();
      for (std::size_t i = 0; i < da.size(); ++i) da[i] += dy[i] * bd[i];
    }
    if (gr.requires_grad(b)) {
      auto db = gr.grad(b);
      const auto ad = gr.value(a).data();
      for (std::size_t i = 0; i < db.size(); ++i) db[i] += dy[i] * ad[i];
    }
  });
}

Var Sum(Graph& g, Var x) {
  double acc = 0.0;
  for (float v : g.value(x).data()) acc += v;
  Var out{static_cast<int>(g.size())};
  return g.Record(Tensor({1}, {static_cast<float>(acc)}), {x}, [=](Graph& gr) {
    const float d = gr.grad(out)[0];
    for (float& v : gr.grad(x)) v += d;
  });
}

}  // namespace wcnn
