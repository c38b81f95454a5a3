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

#include "wcnn/dataset.h"

#include <algorithm>
#include <fstream>
#include <map>

#include "wcnn/error.h"
#include "wcnn/netpbm.h"

namespace fs = std::filesystem;

namespace wcnn {
namespace {

std::vector<fs::path> SortedEntries(const fs::path& dir, bool directories) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (directories ? e.is_directory() : e.is_regular_file()) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end(), [](const fs::path& a, const fs::path& b) {
    return a.filename().string() < b.filename().string();
  });
  return out;
}

bool IsNetpbm(const fs::path& p) {
  const std::string ext = p.extension().string();
  return ext == ".ppm" || ext == ".pgm" || ext == ".pnm";
}

Tensor ToThreeChannels(Tensor image) {
  if (image.dim(0) == 3) return image;
  const std::size_t plane = image.size();
  std::vector<float> data(3 * plane);
  for (int c = 0; c < 3; ++c) {
    std::copy(image.data().begin(), image.data().end(), data.begin() + c * plane);
  }
  return Tensor({3, image.dim(1), image.dim(2)}, std::move(data));
}

}  // namespace

int Dataset::GroupCount(int label) const {
  int count = 0;
  for (const auto& item : items) {
    if (item.label == label) count = std::max(count, item.group + 1);
  }
  return count;
}

Tensor ResizeNearest(const Tensor& image, int height, int width) {
  if (image.rank() != 3) throw ShapeError("resize: image must be [C,H,W]");
  if (height <= 0 || width <= 0) throw ArgumentError("resize: target must be positive");
  const int c = image.dim(0);
  const int h = image.dim(1);
  const int w = image.dim(2);
  if (h == height && w == width) return image;
  Tensor out({c, height, width});
  for (int ch = 0; ch < c; ++ch) {
    for (int i = 0; i < height; ++i) {
      const int si = static_cast<int>(static_cast<long>(i) * h / height);
      for (int j = 0; j < width; ++j) {
        const int sj = static_cast<int>(static_cast<long>(j) * w / width);
        out.at({ch, i, j}) = image.at({ch, si, sj});
      }
    }
  }
  return out;
}

Dataset IngestDirectory(const fs::path& root, int image_size) {
  if (image_size <= 0) throw ArgumentError("ingest: image size must be positive");
  if (!fs::is_directory(root)) {
    throw IngestionError("dataset root " + root.string() + " is not a directory");
  }
  Dataset ds;
  ds.image_size = image_size;
  for (const auto& class_dir : SortedEntries(root, true)) {
    const int label = ds.num_classes();
    const std::string class_name = class_dir.filename().string();
    ds.classes.push_back(class_name);
    int group = 0;
    std::size_t found = 0;
    for (const auto& group_dir : SortedEntries(class_dir, true)) {
      std::size_t in_group = 0;
      for (const auto& file : SortedEntries(group_dir, false)) {
        if (!IsNetpbm(file)) continue;
        DatasetItem item;
        item.relative_path = class_name + "/" + group_dir.filename().string() + "/" +
                             file.filename().string();
        item.label = label;
        item.group = group;
        item.image = ResizeNearest(ToThreeChannels(LoadPnm(file)), image_size, image_size);
        ds.items.push_back(std::move(item));
        ++in_group;
      }
      if (in_group > 0) ++group;
      found += in_group;
    }
    if (found == 0) {
      throw IngestionError("class '" + class_name + "' has no images under " +
                           class_dir.string());
    }
  }
  if (ds.classes.empty()) throw IngestionError("no class directories under " + root.string());
  return ds;
}

void ValidateSplit(const Dataset& dataset, const SplitPlan& plan) {
  if (plan.train.empty() || plan.test.empty()) {
    throw ProtocolError("split " + std::to_string(plan.index) +
                        " has an empty train or test side");
  }
  std::vector<char> seen(dataset.items.size(), 0);
  for (const auto* side : {&plan.train, &plan.test}) {
    for (int i : *side) {
      if (i < 0 || i >= static_cast<int>(dataset.items.size())) {
        throw ProtocolError("split references missing item " + std::to_string(i));
      }
      if (seen[i]++) {
        throw ProtocolError("item " + dataset.items[i].relative_path +
                            " appears twice in split " + std::to_string(plan.index));
      }
    }
  }
}

std::vector<SplitPlan> KthStyleSplits(const Dataset& dataset) {
  if (dataset.items.empty()) throw ProtocolError("kth splits: empty dataset");
  const int groups = dataset.GroupCount(0);
  for (int k = 1; k < dataset.num_classes(); ++k) {
    if (dataset.GroupCount(k) != groups) {
      throw ProtocolError("kth splits: class '" + dataset.classes[k] + "' has " +
                          std::to_string(dataset.GroupCount(k)) +
                          " sample groups, class '" + dataset.classes[0] + "' has " +
                          std::to_string(groups));
    }
  }
  if (groups < 2) {
    throw ProtocolError("kth splits: need at least 2 sample groups per class, got " +
                        std::to_string(groups));
  }
  std::vector<SplitPlan> plans;
  for (int g = 0; g < groups; ++g) {
    const int train_group[] = {g};
    plans.push_back(GroupHoldoutSplit(dataset, train_group, g));
  }
  return plans;
}

SplitPlan GroupHoldoutSplit(const Dataset& dataset, std::span<const int> train_groups,
                            int index) {
  SplitPlan plan;
  plan.mode = SplitMode::kGroupHoldout;
  plan.index = index;
  for (int i = 0; i < static_cast<int>(dataset.items.size()); ++i) {
    const bool train = std::find(train_groups.begin(), train_groups.end(),
                                 dataset.items[i].group) != train_groups.end();
    (train ? plan.train : plan.test).push_back(i);
  }
  ValidateSplit(dataset, plan);
  return plan;
}

std::vector<std::string> ReadSplitList(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open split list " + path.string());
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

SplitPlan FixedListSplit(const Dataset& dataset, std::span<const std::string> train,
                         std::span<const std::string> test, int index) {
  std::map<std::string, int> by_path;
  for (int i = 0; i < static_cast<int>(dataset.items.size()); ++i) {
    by_path[dataset.items[i].relative_path] = i;
  }
  auto resolve = [&](std::span<const std::string> list) {
    std::vector<int> out;
    for (const auto& p : list) {
      const auto it = by_path.find(p);
      if (it == by_path.end()) throw ProtocolError("split list names unknown image " + p);
      out.push_back(it->second);
    }
    return out;
  };
  SplitPlan plan;
  plan.mode = SplitMode::kFixedLists;
  plan.index = index;
  plan.train = resolve(train);
  plan.test = resolve(test);
  ValidateSplit(dataset, plan);
  return plan;
}

}  // namespace wcnn
