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

#ifndef WCNN_SRC_KERNEL_RANGES_H_
#define WCNN_SRC_KERNEL_RANGES_H_

#include <algorithm>

namespace wcnn::kernels {

struct IndexRange {
  int begin;
  int end;
};

// Output indices i in [0, out_extent) whose tap i*stride + offset - pad
// lands inside [0, in_extent).
inline IndexRange ValidRange(int pad, int offset, int stride, int in_extent,
                             int out_extent) {
  const int shift = offset - pad;
  const int lo_num = -shift;  // need i*stride >= -shift
  int lo = lo_num <= 0 ? 0 : (lo_num + stride - 1) / stride;
  const int hi_num = in_extent - 1 - shift;  // need i*stride <= hi_num
  int hi = hi_num < 0 ? 0 : hi_num / stride + 1;
  lo = std::min(lo, out_extent);
  hi = std::clamp(hi, lo, out_extent);
  return {lo, hi};
}

}  // namespace wcnn::kernels

#endif  // WCNN_SRC_KERNEL_RANGES_H_
