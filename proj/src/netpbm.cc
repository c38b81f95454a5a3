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

#include "wcnn/netpbm.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

#include "wcnn/error.h"

namespace wcnn {
namespace {

class HeaderParser {
 public:
  explicit HeaderParser(std::span<const unsigned char> bytes) : bytes_(bytes) {}

  void SkipSpaceAndComments() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else {
        return;
      }
    }
  }

  int Number(const char* what) {
    SkipSpaceAndComments();
    const std::size_t start = pos_;
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > (1L << 24)) throw CodecError(std::string(what) + " too large", start);
      ++pos_;
    }
    if (pos_ == start) throw CodecError(std::string("expected ") + what, pos_);
    return static_cast<int>(value);
  }

  // Exactly one whitespace byte separates the header from the raster.
  void RasterSeparator() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw CodecError("expected whitespace before raster", pos_);
    }
    ++pos_;
  }

  std::size_t pos() const { return pos_; }
  void Advance(std::size_t n) { pos_ += n; }

 private:
  std::span<const unsigned char> bytes_;
  std::size_t pos_ = 0;
};

std::vector<unsigned char> ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open image " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void WriteFile(const std::vector<unsigned char>& bytes,
               const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("cannot write image " + path.string());
}

std::vector<unsigned char> Header(const char* magic, int width, int height) {
  const std::string h = std::string(magic) + "\n" + std::to_string(width) + " " +
                        std::to_string(height) + "\n255\n";
  return {h.begin(), h.end()};
}

unsigned char ToByte(double v) {
  return static_cast<unsigned char>(std::clamp(std::lround(v), 0L, 255L));
}

}  // namespace

Tensor DecodePnm(std::span<const unsigned char> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6')) {
    throw CodecError("bad magic: expected P5 or P6", 0);
  }
  const int channels = bytes[1] == '6' ? 3 : 1;
  HeaderParser p(bytes);
  p.Advance(2);
  const int width = p.Number("width");
  const int height = p.Number("height");
  const std::size_t maxval_at = p.pos();
  const int maxval = p.Number("maxval");
  if (maxval != 255) {
    throw CodecError("unsupported maxval " + std::to_string(maxval) + " (need 255)",
                     maxval_at);
  }
  if (width <= 0 || height <= 0) throw CodecError("empty image", maxval_at);
  p.RasterSeparator();
  const std::size_t raster = static_cast<std::size_t>(width) * height * channels;
  if (bytes.size() - p.pos() < raster) {
    throw CodecError("truncated raster: need " + std::to_string(raster) +
                         " bytes, have " + std::to_string(bytes.size() - p.pos()),
                     bytes.size());
  }
  Tensor image({channels, height, width});
  const unsigned char* src = bytes.data() + p.pos();
  const std::size_t plane = static_cast<std::size_t>(width) * height;
  for (std::size_t px = 0; px < plane; ++px) {
    for (int c = 0; c < channels; ++c) {
      image[c * plane + px] = static_cast<float>(src[px * channels + c]) / 255.0f;
    }
  }
  return image;
}

Tensor LoadPnm(const std::filesystem::path& path) {
  const auto bytes = ReadFile(path);
  return DecodePnm(bytes);
}

Tensor LoadPpm(const std::filesystem::path& path) {
  const auto bytes = ReadFile(path);
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6') {
    throw CodecError("bad magic: expected P6", 0);
  }
  return DecodePnm(bytes);
}

std::vector<unsigned char> EncodePgm(const Tensor& image, PixelMapping mapping) {
  if (image.rank() != 2 && image.rank() != 3) {
    throw ShapeError("pgm: image must be [H,W] or [C,H,W], got " +
                     ShapeToString(image.shape()));
  }
  const int c = image.rank() == 3 ? image.dim(0) : 1;
  const int h = image.dim(-2);
  const int w = image.dim(-1);
  const auto data = image.data();
  double scale = 1.0;
  double offset = 0.0;
  double center = 0.0;
  if (mapping == PixelMapping::kMinMax && !data.empty()) {
    const auto [lo, hi] = std::minmax_element(data.begin(), data.end());
    if (*hi > *lo) {
      scale = 255.0 / (double{*hi} - *lo);
      offset = *lo;
    } else {
      scale = 0.0;
      center = 128.0;
    }
  } else if (mapping == PixelMapping::kSymmetric) {
    double peak = 0.0;
    for (float v : data) peak = std::max(peak, std::abs(double{v}));
    scale = peak > 0.0 ? 127.0 / peak : 0.0;
    center = 128.0;
  }
  auto bytes = Header("P5", c * w, h);
  const std::size_t plane = static_cast<std::size_t>(h) * w;
  for (int i = 0; i < h; ++i) {
    for (int ch = 0; ch < c; ++ch) {
      for (int j = 0; j < w; ++j) {
        const double v = data[ch * plane + static_cast<std::size_t>(i) * w + j];
        switch (mapping) {
          case PixelMapping::kUnit:
            bytes.push_back(ToByte(std::clamp(v, 0.0, 1.0) * 255.0));
            break;
          case PixelMapping::kMinMax:
            bytes.push_back(ToByte(center + (v - offset) * scale));
            break;
          case PixelMapping::kSymmetric:
            bytes.push_back(ToByte(center + v * scale));
            break;
        }
      }
    }
  }
  return bytes;
}

void SavePgm(const Tensor& image, const std::filesystem::path& path,
             PixelMapping mapping) {
  WriteFile(EncodePgm(image, mapping), path);
}

std::vector<unsigned char> EncodePpm(const Tensor& image) {
  if (image.rank() != 3 || image.dim(0) != 3) {
    throw ShapeError("ppm: image must be [3,H,W], got " + ShapeToString(image.shape()));
  }
  const int h = image.dim(1);
  const int w = image.dim(2);
  const std::size_t plane = static_cast<std::size_t>(h) * w;
  auto bytes = Header("P6", w, h);
  for (std::size_t px = 0; px < plane; ++px) {
    for (int c = 0; c < 3; ++c) {
      bytes.push_back(ToByte(std::clamp(double{image[c * plane + px]}, 0.0, 1.0) * 255.0));
    }
  }
  return bytes;
}

void SavePpm(const Tensor& image, const std::filesystem::path& path) {
  WriteFile(EncodePpm(image), path);
}

Tensor Quantize(const Tensor& image) {
  Tensor out = image;
  for (float& v : out.data()) {
    v = static_cast<float>(ToByte(std::clamp(double{v}, 0.0, 1.0) * 255.0)) / 255.0f;
  }
  return out;
}

}  // namespace wcnn
