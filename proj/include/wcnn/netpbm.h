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

#ifndef WCNN_NETPBM_H_
#define WCNN_NETPBM_H_

#include <filesystem>
#include <span>
#include <vector>

#include "wcnn/tensor.h"

// Binary Netpbm codec (P5 greymap, P6 pixmap), maxval 255 only. Pixel values
// map to [0, 1] as byte / 255.
namespace wcnn {

// P5 -> [1, H, W], P6 -> [3, H, W]. Throws CodecError with the byte offset
// of the first malformed or missing byte.
Tensor DecodePnm(std::span<const unsigned char> bytes);
Tensor LoadPnm(const std::filesystem::path& path);
// Like LoadPnm but only accepts P6.
Tensor LoadPpm(const std::filesystem::path& path);

// How real values become bytes when writing.
enum class PixelMapping {
  kUnit,       // round(clamp(v, 0, 1) * 255)
  kMinMax,     // affine [min, max] -> [0, 255]; a constant image maps to 128
  kSymmetric,  // 0 -> 128, +-max|v| -> 128 +- 127; for signed detail bands
};

// Accepts [H, W] or [C, H, W]; C > 1 channels are tiled left to right into
// one greymap of width C * W.
std::vector<unsigned char> EncodePgm(const Tensor& image,
                                     PixelMapping mapping = PixelMapping::kMinMax);
void SavePgm(const Tensor& image, const std::filesystem::path& path,
             PixelMapping mapping = PixelMapping::kMinMax);

// [3, H, W] with kUnit mapping.
std::vector<unsigned char> EncodePpm(const Tensor& image);
void SavePpm(const Tensor& image, const std::filesystem::path& path);

// Rounds every value to the nearest multiple of 1/255 inside [0, 1].
Tensor Quantize(const Tensor& image);

}  // namespace wcnn

#endif  // WCNN_NETPBM_H_
