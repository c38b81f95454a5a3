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

#include "wcnn/wavelet.h"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>

#include "wcnn/error.h"

namespace wcnn {
namespace {

// Periodic analysis of n samples read with the given stride.
void Analyze(const float* in, int n, std::ptrdiff_t in_stride,
             const WaveletFilterPair& pair, float* low, float* high,
             std::ptrdiff_t out_stride) {
  const int taps = static_cast<int>(pair.low.size());
  for (int i = 0; i < n / 2; ++i) {
    double lo = 0.0;
    double hi = 0.0;
    for (int m = 0; m < taps; ++m) {
      const double v = in[((2 * i + m) % n) * in_stride];
      lo += pair.low[m] * v;
      hi += pair.high[m] * v;
    }
    low[i * out_stride] = static_cast<float>(lo);
    high[i * out_stride] = static_cast<float>(hi);
  }
}

// Transpose of Analyze; for an orthonormal pair this is its inverse.
void Synthesize(const float* low, const float* high, int half,
                std::ptrdiff_t in_stride, const WaveletFilterPair& pair,
                float* out, std::ptrdiff_t out_stride) {
  const int n = 2 * half;
  const int taps = static_cast<int>(pair.low.size());
  std::vector<double> acc(n, 0.0);
  for (int i = 0; i < half; ++i) {
    const double lo = low[i * in_stride];
    const double hi = high[i * in_stride];
    for (int m = 0; m < taps; ++m) {
      acc[(2 * i + m) % n] += pair.low[m] * lo + pair.high[m] * hi;
    }
  }
  for (int k = 0; k < n; ++k) out[k * out_stride] = static_cast<float>(acc[k]);
}

void CheckSignal(int n, const WaveletFilterPair& pair, const std::string& what) {
  if (n % 2 != 0) {
    throw ArgumentError(what + ": length " + std::to_string(n) + " is odd");
  }
  if (n < static_cast<int>(pair.low.size())) {
    throw ArgumentError(what + ": length " + std::to_string(n) +
                        " shorter than filter length " +
                        std::to_string(pair.low.size()));
  }
}

void CheckImage(const Tensor& image, const std::string& what) {
  if (image.rank() != 3) {
    throw ShapeError(what + ": image must be [C,H,W], got " +
                     ShapeToString(image.shape()));
  }
}

}  // namespace

WaveletFilterPair MakeFilterPair(std::string name, std::vector<double> low,
                                 std::vector<double> high) {
  if (low.empty() || low.size() % 2 != 0 || low.size() != high.size()) {
    throw ArgumentError("filter pair '" + name +
                        "': filters must have equal even length");
  }
  return {std::move(name), std::move(low), std::move(high)};
}

WaveletFilterPair Haar() {
  const double r = 1.0 / std::sqrt(2.0);
  return MakeFilterPair("haar", {r, r}, {r, -r});
}

std::string QmfReport::ToString() const {
  std::ostringstream out;
  out << (passed ? "pass" : "fail") << " (tol " << tolerance
      << "): mirror=" << mirror << " normalization=" << normalization
      << " orthogonality=" << orthogonality << " shift=" << shift;
  return out.str();
}

QmfReport QmfCheck(const WaveletFilterPair& pair, double tolerance) {
  const auto& lo = pair.low;
  const auto& hi = pair.high;
  const int len = static_cast<int>(lo.size());
  QmfReport r;
  r.tolerance = tolerance;
  double norm = 0.0;
  double cross = 0.0;
  for (int n = 0; n < len; ++n) {
    const double sign = n % 2 == 0 ? 1.0 : -1.0;
    r.mirror = std::max(r.mirror, std::abs(hi[n] - sign * lo[len - 1 - n]));
    norm += lo[n] * lo[n];
    cross += lo[n] * hi[n];
  }
  r.normalization = std::abs(norm - 1.0);
  r.orthogonality = std::abs(cross);
  for (int m = 1; 2 * m < len; ++m) {
    double s = 0.0;
    for (int n = 0; n + 2 * m < len; ++n) s += lo[n] * lo[n + 2 * m];
    r.shift = std::max(r.shift, std::abs(s));
  }
  r.passed = r.mirror <= tolerance && r.normalization <= tolerance &&
             r.orthogonality <= tolerance && r.shift <= tolerance;
  return r;
}

Bands1d Dwt1d(std::span<const float> x, const WaveletFilterPair& pair) {
  const int n = static_cast<int>(x.size());
  CheckSignal(n, pair, "dwt1d");
  Bands1d out{std::vector<float>(n / 2), std::vector<float>(n / 2)};
  Analyze(x.data(), n, 1, pair, out.low.data(), out.high.data(), 1);
  return out;
}

std::vector<float> Idwt1d(std::span<const float> low,
                          std::span<const float> high,
                          const WaveletFilterPair& pair) {
  if (low.size() != high.size()) {
    throw ShapeError("idwt1d: low and high bands differ in length");
  }
  const int half = static_cast<int>(low.size());
  CheckSignal(2 * half, pair, "idwt1d");
  std::vector<float> x(2 * half);
  Synthesize(low.data(), high.data(), half, 1, pair, x.data(), 1);
  return x;
}

Subbands Dwt2d(const Tensor& image, const WaveletFilterPair& pair) {
  CheckImage(image, "dwt2d");
  const int c = image.dim(0);
  const int h = image.dim(1);
  const int w = image.dim(2);
  CheckSignal(h, pair, "dwt2d height");
  CheckSignal(w, pair, "dwt2d width");
  const int hh = h / 2;
  const int hw = w / 2;
  // Row pass: [C, H, W/2] low and high along the horizontal axis.
  std::vector<float> row_low(static_cast<std::size_t>(c) * h * hw);
  std::vector<float> row_high(row_low.size());
  for (int ch = 0; ch < c; ++ch) {
    for (int i = 0; i < h; ++i) {
      const std::size_t src = (static_cast<std::size_t>(ch) * h + i) * w;
      const std::size_t dst = (static_cast<std::size_t>(ch) * h + i) * hw;
      Analyze(image.data().data() + src, w, 1, pair, row_low.data() + dst,
              row_high.data() + dst, 1);
    }
  }
  Subbands out{Tensor({c, hh, hw}), Tensor({c, hh, hw}), Tensor({c, hh, hw}),
               Tensor({c, hh, hw})};
  // Column pass.
  for (int ch = 0; ch < c; ++ch) {
    const std::size_t src = static_cast<std::size_t>(ch) * h * hw;
    const std::size_t dst = static_cast<std::size_t>(ch) * hh * hw;
    for (int j = 0; j < hw; ++j) {
      Analyze(row_low.data() + src + j, h, hw, pair,
              out.ll.data().data() + dst + j, out.hl.data().data() + dst + j, hw);
      Analyze(row_high.data() + src + j, h, hw, pair,
              out.lh.data().data() + dst + j, out.hh.data().data() + dst + j, hw);
    }
  }
  return out;
}

Tensor Idwt2d(const Subbands& bands, const WaveletFilterPair& pair) {
  CheckImage(bands.ll, "idwt2d");
  const Shape& s = bands.ll.shape();
  if (bands.lh.shape() != s || bands.hl.shape() != s || bands.hh.shape() != s) {
    throw StructureError("idwt2d: subbands differ in shape");
  }
  const int c = s[0];
  const int hh = s[1];
  const int hw = s[2];
  const int h = 2 * hh;
  const int w = 2 * hw;
  std::vector<float> row_low(static_cast<std::size_t>(c) * h * hw);
  std::vector<float> row_high(row_low.size());
  for (int ch = 0; ch < c; ++ch) {
    const std::size_t src = static_cast<std::size_t>(ch) * hh * hw;
    const std::size_t dst = static_cast<std::size_t>(ch) * h * hw;
    for (int j = 0; j < hw; ++j) {
      Synthesize(bands.ll.data().data() + src + j, bands.hl.data().data() + src + j,
                 hh, hw, pair, row_low.data() + dst + j, hw);
      Synthesize(bands.lh.data().data() + src + j, bands.hh.data().data() + src + j,
                 hh, hw, pair, row_high.data() + dst + j, hw);
    }
  }
  Tensor image({c, h, w});
  for (int ch = 0; ch < c; ++ch) {
    for (int i = 0; i < h; ++i) {
      const std::size_t src = (static_cast<std::size_t>(ch) * h + i) * hw;
      const std::size_t dst = (static_cast<std::size_t>(ch) * h + i) * w;
      Synthesize(row_low.data() + src, row_high.data() + src, hw, 1, pair,
                 image.data().data() + dst, 1);
    }
  }
  return image;
}

MraDecomposition Decompose(const Tensor& image, const WaveletFilterPair& pair,
                           int levels) {
  CheckImage(image, "decompose");
  if (levels < 1) {
    throw ArgumentError("decompose: level count must be at least 1, got " +
                        std::to_string(levels));
  }
  const int taps = static_cast<int>(pair.low.size());
  int h = image.dim(1);
  int w = image.dim(2);
  for (int l = 1; l <= levels; ++l) {
    if (h % 2 != 0 || w % 2 != 0 || h < taps || w < taps) {
      throw ArgumentError("decompose: level " + std::to_string(l) +
                          " cannot split a " + std::to_string(h) + "x" +
                          std::to_string(w) + " band (need even extents >= " +
                          std::to_string(taps) + ")");
    }
    h /= 2;
    w /= 2;
  }
  MraDecomposition mra;
  mra.source_shape = image.shape();
  mra.levels.reserve(levels);
  mra.levels.push_back(Dwt2d(image, pair));
  for (int l = 1; l < levels; ++l) {
    mra.levels.push_back(Dwt2d(mra.levels.back().ll, pair));
  }
  return mra;
}

Tensor Reconstruct(const MraDecomposition& mra, const WaveletFilterPair& pair) {
  if (mra.source_shape.size() != 3) {
    throw StructureError("reconstruct: source shape must be [C,H,W]");
  }
  if (mra.levels.empty()) throw StructureError("reconstruct: pyramid has no levels");
  const int c = mra.source_shape[0];
  int h = mra.source_shape[1];
  int w = mra.source_shape[2];
  for (std::size_t l = 0; l < mra.levels.size(); ++l) {
    if (h % 2 != 0 || w % 2 != 0) {
      throw StructureError("reconstruct: level " + std::to_string(l + 1) +
                           " does not halve the source extents");
    }
    h /= 2;
    w /= 2;
    const Shape expected{c, h, w};
    const Subbands& b = mra.levels[l];
    for (const Tensor* t : {&b.ll, &b.lh, &b.hl, &b.hh}) {
      if (t->shape() != expected) {
        throw StructureError("reconstruct: level " + std::to_string(l + 1) +
                             " holds a " + ShapeToString(t->shape()) +
                             " band, expected " + ShapeToString(expected));
      }
    }
  }
  Tensor current = mra.levels.back().ll;
  for (std::size_t l = mra.levels.size(); l-- > 0;) {
    const Subbands& b = mra.levels[l];
    current = Idwt2d({std::move(current), b.lh, b.hl, b.hh}, pair);
  }
  return current;
}

}  // namespace wcnn
