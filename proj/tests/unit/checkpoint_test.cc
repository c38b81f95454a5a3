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

#include <cstring>
#include <filesystem>
#include <fstream>
#include <vector>

#include "doctest.h"
#include "oracles.h"
#include "wcnn/checkpoint.h"
#include "wcnn/error.h"
#include "wcnn/training.h"

namespace wcnn {
namespace {

namespace fs = std::filesystem;

Network TrainedLookingNet(SubbandMode mode = SubbandMode::kAll) {
  NetworkSpec spec;
  spec.input_shape = {3, 16, 16};
  spec.levels = 2;
  spec.base_channels = 4;
  spec.num_classes = 3;
  spec.subband_mode = mode;
  Network net(spec);
  HeInit(net, 21);
  std::uint64_t seed = 100;
  for (auto& b : net.Buffers()) *b.tensor = testing::RandomTensor(b.tensor->shape(), seed++, 0.1f, 2.0f);
  return net;
}

fs::path TempPath(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "wcnn_checkpoint_test";
  fs::create_directories(dir);
  return dir / name;
}

void CheckSameState(const Network& a, const Network& b) {
  const auto pa = a.Parameters();
  const auto pb = b.Parameters();
  REQUIRE(pa.size() == pb.size());
  for (std::size_t i = 0; i < pa.size(); ++i) {
    CHECK(pa[i].name == pb[i].name);
    CHECK(*pa[i].tensor == *pb[i].tensor);
  }
  const auto ba = a.Buffers();
  const auto bb = b.Buffers();
  REQUIRE(ba.size() == bb.size());
  for (std::size_t i = 0; i < ba.size(); ++i) CHECK(*ba[i].tensor == *bb[i].tensor);
}

TEST_CASE("checkpoint: round trip is bit-identical") {
  for (SubbandMode mode : {SubbandMode::kAll, SubbandMode::kDetailOnly}) {
    const Network net = TrainedLookingNet(mode);
    const Network back = DeserializeCheckpoint(SerializeCheckpoint(net));
    CHECK(back.spec().subband_mode == mode);
    CheckSameState(net, back);
    const Tensor x = testing::RandomTensor({2, 3, 16, 16}, 5);
    CHECK(net.Predict(x) == back.Predict(x));
  }
}

TEST_CASE("checkpoint: file round trip and header layout") {
  const Network net = TrainedLookingNet();
  const fs::path path = TempPath("net.wcnn");
  SaveCheckpoint(net, path);
  CheckSameState(net, LoadCheckpoint(path));
  CheckSameState(net, LoadCheckpoint(path, net.spec()));
  const auto bytes = SerializeCheckpoint(net);
  REQUIRE(bytes.size() > 12);
  CHECK(std::memcmp(bytes.data(), "WCNN", 4) == 0);
  CHECK(bytes[4] == kCheckpointVersion);
  CHECK(bytes[5] == 0);
  CHECK(bytes[6] == 0);
  CHECK(bytes[7] == 0);
  CHECK(SerializeCheckpoint(LoadCheckpoint(path)) == bytes);
}

TEST_CASE("checkpoint: corrupt magic is an integrity error") {
  auto bytes = SerializeCheckpoint(TrainedLookingNet());
  bytes[0] = 'X';
  CHECK_THROWS_AS(DeserializeCheckpoint(bytes), IntegrityError);
}

TEST_CASE("checkpoint: payload corruption fails the CRC") {
  auto bytes = SerializeCheckpoint(TrainedLookingNet());
  bytes[bytes.size() / 2] ^= 0x10;
  CHECK_THROWS_AS(DeserializeCheckpoint(bytes), IntegrityError);
}

TEST_CASE("checkpoint: truncation is an integrity error") {
  const auto bytes = SerializeCheckpoint(TrainedLookingNet());
  for (std::size_t keep : {std::size_t{0}, std::size_t{3}, std::size_t{10}, bytes.size() / 2,
                           bytes.size() - 1}) {
    CAPTURE(keep);
    const std::vector<unsigned char> cut(bytes.begin(), bytes.begin() + keep);
    CHECK_THROWS_AS(DeserializeCheckpoint(cut), IntegrityError);
  }
}

TEST_CASE("checkpoint: unknown version is a spec mismatch") {
  auto bytes = SerializeCheckpoint(TrainedLookingNet());
  bytes[4] = kCheckpointVersion + 1;
  CHECK_THROWS_AS(DeserializeCheckpoint(bytes), SpecMismatchError);
}

TEST_CASE("checkpoint: loading against a different spec is a spec mismatch") {
  const Network net = TrainedLookingNet();
  const fs::path path = TempPath("spec.wcnn");
  SaveCheckpoint(net, path);
  NetworkSpec other = net.spec();
  other.num_classes = 5;
  CHECK_THROWS_AS(LoadCheckpoint(path, other), SpecMismatchError);
  other = net.spec();
  other.levels = 1;
  CHECK_THROWS_AS(LoadCheckpoint(path, other), SpecMismatchError);
}

TEST_CASE("checkpoint: missing file is an I/O error") {
  CHECK_THROWS_AS(LoadCheckpoint(TempPath("does-not-exist.wcnn")), IoError);
}

}  // namespace
}  // namespace wcnn
