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

#ifndef WCNN_TOOLS_CLI_H_
#define WCNN_TOOLS_CLI_H_

#include <exception>
#include <ostream>
#include <string>
#include <vector>

#include "wcnn/config.h"
#include "wcnn/dataset.h"

namespace wcnn::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;     // usage, configuration, arguments
inline constexpr int kExitIo = 3;        // files, codecs, checkpoints, ingestion
inline constexpr int kExitNumeric = 4;   // non-finite loss or gradients
inline constexpr int kExitInternal = 1;  // anything else

int ExitCodeFor(const std::exception& e);

// Runs one command; args excludes the program name. Never throws.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Synthetic data when config.data is empty, otherwise the directory tree
// rescaled to train.crop_source.
Dataset LoadData(const RunConfig& config);

// Expands config.split against a dataset:
//   auto        holdout:0 for synthetic data, kth otherwise
//   kth         one plan per sample group
//   kth:<i>     plan i only
//   holdout:g,..  train on the listed groups, test on the rest
//   list:a,b    fixed train/test list files
std::vector<SplitPlan> ResolveSplits(const Dataset& dataset, const RunConfig& config);

}  // namespace wcnn::cli

#endif  // WCNN_TOOLS_CLI_H_
