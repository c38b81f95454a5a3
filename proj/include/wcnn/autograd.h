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

#ifndef WCNN_AUTOGRAD_H_
#define WCNN_AUTOGRAD_H_

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

#include "wcnn/ops.h"
#include "wcnn/tensor.h"

namespace wcnn {

enum class Mode { kTraining, kInference };

// Handle to a value recorded in a Graph.
struct Var {
  int id = -1;
};

// Tape of executed operations. Values live in the graph; parameters are
// referenced, and their gradients accumulate directly into Tensor::grad().
// One Graph serves exactly one forward pass and at most one backward pass.
class Graph {
 public:
  using BackwardFn = std::function<void(Graph&)>;

  explicit Graph(Mode mode = Mode::kTraining) : mode_(mode) {}
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  Mode mode() const { return mode_; }
  bool training() const { return mode_ == Mode::kTraining; }

  Var Constant(Tensor value);
  // param must outlive the graph.
  Var Parameter(Tensor& param);

  // Appends an op result. fn is kept only when some input needs a gradient.
  Var Record(Tensor value, std::initializer_list<Var> inputs, BackwardFn fn);
  Var Record(Tensor value, std::span<const Var> inputs, BackwardFn fn);

  const Tensor& value(Var v) const;
  bool requires_grad(Var v) const;
  // Gradient buffer of v, zero-initialized on first access.
  std::span<float> grad(Var v);

  // Reverse-mode sweep from a scalar loss.
  void Backward(Var loss);

  // Node ids in the order Backward visited them.
  const std::vector<int>& backward_order() const { return backward_order_; }
  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor owned;
    Tensor* param = nullptr;
    std::vector<float> grad;
    BackwardFn backward;
    bool requires_grad = false;
  };

  const Node& node(Var v) const;
  Node& node(Var v);

  Mode mode_;
  std::vector<Node> nodes_;
  std::vector<int> backward_order_;
  bool backward_done_ = false;
};

// Recorded operations; forward semantics match the eager versions in ops.h.
Var Conv2d(Graph& g, Var x, Var w, Var bias, int stride, int pad);
Var Conv2d(Graph& g, Var x, Var w, Var bias, int stride, const Padding& pad);
Var Downsample(Graph& g, Var x, int p);
Var Relu(Graph& g, Var x);
Var Linear(Graph& g, Var x, Var w, Var b);
Var Energy(Graph& g, Var x);
Var ConcatChannels(Graph& g, std::span<const Var> parts);
Var BatchNorm(Graph& g, Var x, Var gamma, Var beta, const BatchNormStats& stats);
// Scalar (shape [1]) mean cross-entropy.
Var SoftmaxCrossEntropy(Graph& g, Var logits, std::span<const int> labels);
Var Mul(Graph& g, Var a, Var b);
// Scalar sum of all elements.
Var Sum(Graph& g, Var x);

}  // namespace wcnn

#endif  // WCNN_AUTOGRAD_H_
