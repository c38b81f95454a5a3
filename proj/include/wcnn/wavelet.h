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

#ifndef WCNN_WAVELET_H_
#define WCNN_WAVELET_H_

#include <span>
#include <string>
#include <vector>

#include "wcnn/tensor.h"

namespace wcnn {

// Analysis filter pair of a two-channel filter bank. low is the scaling
// filter, high the wavelet filter. Both have the same even length.
struct WaveletFilterPair {
  std::string name;
  std::vector<double> low;
  std::vector<double> high;
};

// Validates lengths; throws ArgumentError on odd or unequal lengths.
WaveletFilterPair MakeFilterPair(std::string name, std::vector<double> low,
                                 std::vector<double> high);

// Orthonormal Haar: low = [1, 1] / sqrt(2), high = [1, -1] / sqrt(2).
WaveletFilterPair Haar();

// Residuals of the quadrature-mirror and orthonormality conditions:
//   mirror:         max_n |high[n] - (-1)^n low[L-1-n]|
//   normalization:  |sum low[n]^2 - 1|
//   orthogonality:  |sum low[n] high[n]|
//   shift:          max_{m>0} |sum low[n] low[n+2m]|
struct QmfReport {
  double mirror = 0.0;
  double normalization = 0.0;
  double orthogonality = 0.0;
  double shift = 0.0;
  double tolerance = 0.0;
  bool passed = false;

  std::string ToString() const;
};

QmfReport QmfCheck(const WaveletFilterPair& pair, double tolerance = 1e-6);

struct Bands1d {
  std::vector<float> low;
  std::vector<float> high;
};

// One analysis step with periodic extension:
//   low[i] = sum_m low_filter[m] * x[(2i + m) mod n]
// n must be even and at least the filter length.
Bands1d Dwt1d(std::span<const float> x, const WaveletFilterPair& pair);
std::vector<float> Idwt1d(std::span<const float> low,
                          std::span<const float> high,
                          const WaveletFilterPair& pair);

// Single-level separable 2D subbands of a [C, H, W] image, each
// [C, H/2, W/2]. The first letter names the filter applied down the columns
// (vertical), the second the filter applied along the rows (horizontal):
//   LH: high-pass along rows, low-pass along columns (horizontal detail)
//   HL: low-pass along rows, high-pass along columns (vertical detail)
struct Subbands {
  Tensor ll;
  Tensor lh;
  Tensor hl;
  Tensor hh;
};

Subbands Dwt2d(const Tensor& image, const WaveletFilterPair& pair);
Tensor Idwt2d(const Subbands& bands, const WaveletFilterPair& pair);

// Multiresolution pyramid. levels[l] holds the subbands of level l + 1;
// level 1 comes from the source image, level l + 1 from the LL band of
// level l.
struct MraDecomposition {
  Shape source_shape;
  std::vector<Subbands> levels;
};

MraDecomposition Decompose(const Tensor& image, const WaveletFilterPair& pair,
                           int levels);
// Inverse of Decompose; uses the LL band of the deepest level plus every
// detail band. Throws StructureError on an inconsistent pyramid.
Tensor Reconstruct(const MraDecomposition& mra, const WaveletFilterPair& pair);

}  // namespace wcnn

#endif  // WCNN_WAVELET_H_
