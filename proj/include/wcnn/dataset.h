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

#ifndef WCNN_DATASET_H_
#define WCNN_DATASET_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "wcnn/tensor.h"

namespace wcnn {

struct DatasetItem {
  // Path relative to the dataset root, '/'-separated.
  std::string relative_path;
  int label = 0;
  // Sample-group index within the item's class.
  int group = 0;
  Tensor image;  // [C, image_size, image_size]
};

struct Dataset {
  std::vector<std::string> classes;
  std::vector<DatasetItem> items;
  int image_size = 0;

  int num_classes() const { return static_cast<int>(classes.size()); }
  int channels() const { return items.empty() ? 0 : items.front().image.dim(0); }
  // Number of sample groups of class `label` (max group id + 1).
  int GroupCount(int label) const;
};

// Loads root/<class>/<sample_group>/<image>.{ppm,pgm}. Classes, groups and
// files are taken in lexicographic order; images are rescaled (nearest
// neighbour) to image_size x image_size and greymaps are widened to three
// channels.
Dataset IngestDirectory(const std::filesystem::path& root, int image_size);

// Nearest-neighbour resize of a [C, H, W] image.
Tensor ResizeNearest(const Tensor& image, int height, int width);

enum class SplitMode { kGroupHoldout, kFixedLists };

struct SplitPlan {
  SplitMode mode = SplitMode::kGroupHoldout;
  int index = 0;
  std::vector<int> train;  // item indices
  std::vector<int> test;
};

// Throws ProtocolError if train and test overlap, reference missing items,
// or either side is empty.
void ValidateSplit(const Dataset& dataset, const SplitPlan& plan);

// One plan per sample group g: train on group g of every class, test on the
// remaining groups. Every class must have the same group count G >= 2.
std::vector<SplitPlan> KthStyleSplits(const Dataset& dataset);

// Items whose group is listed train; all other items test.
SplitPlan GroupHoldoutSplit(const Dataset& dataset, std::span<const int> train_groups,
                            int index = 0);

// Reads a newline-delimited list of relative paths (blank lines ignored).
std::vector<std::string> ReadSplitList(const std::filesystem::path& path);
// Items not named in either list are left out of the plan.
SplitPlan FixedListSplit(const Dataset& dataset, std::span<const std::string> train,
                         std::span<const std::string> test, int index = 0);

}  // namespace wcnn

#endif  // WCNN_DATASET_H_
