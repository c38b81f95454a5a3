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

#ifndef WCNN_SRC_OPS_DETAIL_H_
#define WCNN_SRC_OPS_DETAIL_H_

#include <cstddef>
#include <vector>

#include "wcnn/kernels.h"
#include "wcnn/ops.h"
#include "wcnn/tensor.h"

namespace wcnn::detail {

kernels::ConvGeometry ConvGeometryFor(const Shape& x, const Shape& w,
                                      std::size_t bias_size, int stride,
                                      const Padding& pad);
Shape ConvOutputShape(const Shape& x, const kernels::ConvGeometry& g);

// Forward pass shared by the eager and recorded batch norm. When xhat and
// inv_std are non-null they receive the normalized input and the per-channel
// 1/sqrt(var + eps) used.
Tensor BatchNormForward(const Tensor& x, const Tensor& gamma,
                        const Tensor& beta, const BatchNormStats& stats,
                        bool training, std::vector<float>* xhat,
                        std::vector<float>* inv_std);

}  // namespace wcnn::detail

#endif  // WCNN_SRC_OPS_DETAIL_H_
