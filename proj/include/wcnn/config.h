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

#ifndef WCNN_CONFIG_H_
#define WCNN_CONFIG_H_

#include <filesystem>
#include <string>
#include <string_view>

#include "wcnn/network.h"
#include "wcnn/synthetic.h"
#include "wcnn/training.h"

namespace wcnn {

// Everything a training run depends on. On disk it is a flat text file of
// `key = value` lines; `#` starts a comment. Later keys override earlier ones
// except `synthetic`, which selects a preset and is applied before any
// `synthetic_*` key regardless of position.
//
// Network input is [channels, crop_target, crop_target]; channels and the
// class count come from the data.
struct RunConfig {
  int levels = 3;
  int stages = 0;
  int base_channels = 32;
  SubbandMode subbands = SubbandMode::kAll;
  TrainConfig train;
  // Dataset root; empty selects the synthetic generator.
  std::string data;
  std::string synthetic = "default";
  // Generated image size is always train.crop_source.
  SyntheticSpec synthetic_spec = DefaultSyntheticSpec();
  // auto | kth | kth:<i> | holdout:<g>[,<g>...] | list:<train-file>,<test-file>
  // auto means holdout:0 for synthetic data and kth for directories.
  std::string split = "auto";

  // Throws ConfigError.
  void Validate() const;
  NetworkSpec Spec(int channels, int num_classes) const;
  SyntheticSpec Synthetic() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Throws ConfigError naming the line for unknown keys or bad values.
RunConfig ParseRunConfig(std::string_view text);
std::string SerializeRunConfig(const RunConfig& config);
// Throws IoError if the file cannot be read.
RunConfig LoadRunConfig(const std::filesystem::path& path);
// Sets one key as if it appeared at the end of a config file.
void SetRunConfigValue(RunConfig& config, const std::string& key, const std::string& value);

}  // namespace wcnn

#endif  // WCNN_CONFIG_H_
