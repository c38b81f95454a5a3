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

#ifndef WCNN_TESTS_SUPPORT_REFERENCE_NET_H_
#define WCNN_TESTS_SUPPORT_REFERENCE_NET_H_

#include <span>
#include <vector>

#include "wcnn/network.h"

namespace wcnn::testing {

// Double-precision forward pass of a Network written from the architecture
// description alone: direct-sum convolutions, closed-form Haar blocks,
// batch statistics in training mode. Reads parameters, never writes them.
std::vector<double> ReferenceLogits(const Network& net, const Tensor& batch, bool training);

// Extremes of one ReLU site's inputs over the batch (and space), per
// channel or unit.
struct ReluSite {
  std::vector<double> min;
  std::vector<double> max;
};

// ReLU sites in forward order: every batch-norm block, then the hidden dense
// layers. Training-mode statistics.
std::vector<ReluSite> ReferenceReluSites(const Network& net, const Tensor& batch);

// Shifts batch-norm betas and hidden dense biases so every ReLU input on
// `batch` is at least `margin` from zero: even channels fully active, odd
// channels fully inactive. The loss is then differentiable along any
// parameter step that moves no ReLU input by more than the margin.
void MoveOffKinks(Network& net, const Tensor& batch, double margin);

// Mean softmax cross-entropy of ReferenceLogits in training mode.
double ReferenceLoss(const Network& net, const Tensor& batch, std::span<const int> labels);

}  // namespace wcnn::testing

#endif  // WCNN_TESTS_SUPPORT_REFERENCE_NET_H_
