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

#ifndef WCNN_CHECKPOINT_H_
#define WCNN_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "wcnn/network.h"

namespace wcnn {

inline constexpr std::uint32_t kCheckpointVersion = 1;

// Little-endian layout:
//   "WCNN"                      magic
//   u32                         format version
//   spec block                  u32 C, H, W, levels, stages, base_channels,
//                               num_classes; u8 subband mode (0 all,
//                               1 detail-only); u32 n; n x u32 stage widths
//   u32                         tensor count
//   per tensor                  u32 name length, name bytes, u32 rank,
//                               rank x u32 extents, f32 payload
//   u32                         CRC-32 of every byte between the version
//                               field and the CRC
// Tensors are the trainable parameters followed by the batch-norm running
// statistics, in registration order.
std::vector<unsigned char> SerializeCheckpoint(const Network& net);
Network DeserializeCheckpoint(const std::vector<unsigned char>& bytes);

void SaveCheckpoint(const Network& net, const std::filesystem::path& path);
Network LoadCheckpoint(const std::filesystem::path& path);
// Also throws SpecMismatchError unless the stored spec equals `expected`
// (after resolving default stage count and widths).
Network LoadCheckpoint(const std::filesystem::path& path,
                       const NetworkSpec& expected);

}  // namespace wcnn

#endif  // WCNN_CHECKPOINT_H_
