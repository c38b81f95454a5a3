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

#ifndef WCNN_SYNTHETIC_H_
#define WCNN_SYNTHETIC_H_

#include <cstdint>
#include <string>
#include <vector>

#include "wcnn/dataset.h"

namespace wcnn {

// Sinusoidal grating textures. Every (orientation, frequency) pair is one
// class. Each image draws a random phase, jitters orientation and frequency
// inside its bucket, and adds uniform noise per pixel and channel:
//   v = 0.5 + contrast * sin(2 pi f (x cos t + y sin t) + phase) + U(-a, a)
// clamped to [0, 1] and quantized to 8 bits.
struct SyntheticSpec {
  std::vector<double> orientations_deg{0.0, 90.0};
  std::vector<double> frequencies{0.0625, 0.1875};  // cycles per pixel
  double contrast = 0.25;
  double noise = 0.25;
  double orientation_jitter_deg = 5.0;
  double frequency_jitter = 0.1;  // relative
  int train_per_class = 100;      // group 0
  int test_per_class = 50;        // group 1
  int size = 72;
  int channels = 3;
  std::uint64_t seed = 7;

  int num_classes() const {
    return static_cast<int>(orientations_deg.size() * frequencies.size());
  }
  friend bool operator==(const SyntheticSpec&, const SyntheticSpec&) = default;
};

// 2 orientations x 2 frequencies, fine and medium scale.
SyntheticSpec DefaultSyntheticSpec();
// Classes differ only in low-frequency content; all share the same
// fine-scale noise.
SyntheticSpec CoarseSyntheticSpec();
// "default" or "coarse"; throws ArgumentError otherwise.
SyntheticSpec SyntheticPreset(const std::string& name);

// Throws ArgumentError for fewer than two classes or for classes that are
// identical by construction (repeated buckets, or f = 0 shared by several
// orientations).
Dataset GenerateSynthetic(const SyntheticSpec& spec);

}  // namespace wcnn

#endif  // WCNN_SYNTHETIC_H_
