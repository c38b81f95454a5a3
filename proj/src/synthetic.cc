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

#include "wcnn/synthetic.h"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <set>
#include <utility>

#include "wcnn/error.h"
#include "wcnn/netpbm.h"

namespace wcnn {
namespace {

std::string ClassName(double theta, double f) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "theta%03g_f%.4f", theta, f);
  return buf;
}

void CheckSpec(const SyntheticSpec& spec) {
  if (spec.num_classes() < 2) {
    throw ArgumentError("synthetic: need at least 2 classes, got " +
                        std::to_string(spec.num_classes()));
  }
  if (spec.size <= 0 || spec.channels <= 0 || spec.train_per_class <= 0 ||
      spec.test_per_class < 0) {
    throw ArgumentError("synthetic: size, channels and per-class counts must be positive");
  }
  std::set<std::pair<double, double>> buckets;
  int zero_frequency = 0;
  for (double f : spec.frequencies) {
    if (f < 0.0) throw ArgumentError("synthetic: negative frequency");
    for (double t : spec.orientations_deg) {
      if (!buckets.insert({std::fmod(t, 180.0), f}).second) {
        throw ArgumentError("synthetic: duplicate class bucket " + ClassName(t, f));
      }
      if (f == 0.0) ++zero_frequency;
    }
  }
  if (zero_frequency > 1) {
    throw ArgumentError(
        "synthetic: frequency 0 under several orientations yields identical "
        "classes (not separable)");
  }
}

}  // namespace

SyntheticSpec DefaultSyntheticSpec() { return {}; }

SyntheticSpec CoarseSyntheticSpec() {
  SyntheticSpec s;
  s.orientations_deg = {0.0, 90.0};
  s.frequencies = {1.0 / 32.0, 1.0 / 16.0};
  s.contrast = 0.15;
  s.noise = 0.35;
  return s;
}

SyntheticSpec SyntheticPreset(const std::string& name) {
  if (name == "default") return DefaultSyntheticSpec();
  if (name == "coarse") return CoarseSyntheticSpec();
  throw ArgumentError("unknown synthetic preset '" + name +
                      "' (expected default or coarse)");
}

Dataset GenerateSynthetic(const SyntheticSpec& spec) {
  CheckSpec(spec);
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Dataset ds;
  ds.image_size = spec.size;
  const int per_class = spec.train_per_class + spec.test_per_class;
  const int n = spec.size;
  const std::size_t plane = static_cast<std::size_t>(n) * n;
  for (double f : spec.frequencies) {
    for (double theta : spec.orientations_deg) {
      const int label = ds.num_classes();
      const std::string name = ClassName(theta, f);
      ds.classes.push_back(name);
      for (int k = 0; k < per_class; ++k) {
        const double t = (theta + spec.orientation_jitter_deg * (2.0 * unit(rng) - 1.0)) *
                         std::numbers::pi / 180.0;
        const double freq = f * (1.0 + spec.frequency_jitter * (2.0 * unit(rng) - 1.0));
        const double phase = 2.0 * std::numbers::pi * unit(rng);
        const double ct = std::cos(t);
        const double st = std::sin(t);
        std::vector<float> pixels(spec.channels * plane);
        for (int c = 0; c < spec.channels; ++c) {
          for (int y = 0; y < n; ++y) {
            for (int x = 0; x < n; ++x) {
              const double wave = std::sin(2.0 * std::numbers::pi * freq * (x * ct + y * st) + phase);
              const double v = 0.5 + spec.contrast * wave + spec.noise * (2.0 * unit(rng) - 1.0);
              pixels[c * plane + static_cast<std::size_t>(y) * n + x] = static_cast<float>(v);
            }
          }
        }
        DatasetItem item;
        item.label = label;
        item.group = k < spec.train_per_class ? 0 : 1;
        char file[32];
        std::snprintf(file, sizeof(file), "img%04d.ppm", k);
        item.relative_path = name + "/g" + std::to_string(item.group) + "/" + file;
        item.image = Quantize(Tensor({spec.channels, n, n}, std::move(pixels)));
        ds.items.push_back(std::move(item));
      }
    }
  }
  return ds;
}

}  // namespace wcnn
