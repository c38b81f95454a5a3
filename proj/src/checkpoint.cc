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

#include "wcnn/checkpoint.h"

#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <map>
#include <string>

#include "wcnn/error.h"

namespace wcnn {
namespace {

constexpr char kMagic[4] = {'W', 'C', 'N', 'N'};

class Writer {
 public:
  void U8(std::uint8_t v) { bytes_.push_back(v); }
  void U32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<unsigned char>(v >> (8 * i)));
  }
  void F32(float v) { U32(std::bit_cast<std::uint32_t>(v)); }
  void Bytes(const void* p, std::size_t n) {
    const auto* c = static_cast<const unsigned char*>(p);
    bytes_.insert(bytes_.end(), c, c + n);
  }
  std::vector<unsigned char>& bytes() { return bytes_; }

 private:
  std::vector<unsigned char> bytes_;
};

class Reader {
 public:
  Reader(const std::vector<unsigned char>& bytes, std::size_t begin, std::size_t end)
      : bytes_(bytes), pos_(begin), end_(end) {}

  std::uint8_t U8() {
    Need(1);
    return bytes_[pos_++];
  }
  std::uint32_t U32() {
    Need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{bytes_[pos_++]} << (8 * i);
    return v;
  }
  float F32() { return std::bit_cast<float>(U32()); }
  std::string String(std::size_t n) {
    Need(n);
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == end_; }

 private:
  void Need(std::size_t n) const {
    if (end_ - pos_ < n) {
      throw IntegrityError("checkpoint truncated at byte " + std::to_string(pos_));
    }
  }
  const std::vector<unsigned char>& bytes_;
  std::size_t pos_;
  std::size_t end_;
};

std::uint32_t Crc32(const unsigned char* p, std::size_t n) {
  uLong crc = crc32(0L, Z_NULL, 0);
  while (n > 0) {
    const uInt chunk = static_cast<uInt>(std::min<std::size_t>(n, 1u << 30));
    crc = crc32(crc, p, chunk);
    p += chunk;
    n -= chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

NetworkSpec Resolved(NetworkSpec spec) {
  spec.stages = spec.ResolvedStages();
  spec.stage_channels = spec.ResolvedStageChannels();
  return spec;
}

}  // namespace

std::vector<unsigned char> SerializeCheckpoint(const Network& net) {
  const NetworkSpec spec = Resolved(net.spec());
  Writer w;
  w.Bytes(kMagic, 4);
  w.U32(kCheckpointVersion);
  for (int d : spec.input_shape) w.U32(static_cast<std::uint32_t>(d));
  w.U32(spec.levels);
  w.U32(spec.stages);
  w.U32(spec.base_channels);
  w.U32(spec.num_classes);
  w.U8(spec.subband_mode == SubbandMode::kAll ? 0 : 1);
  w.U32(static_cast<std::uint32_t>(spec.stage_channels.size()));
  for (int c : spec.stage_channels) w.U32(c);

  auto tensors = net.Parameters();
  const auto buffers = net.Buffers();
  tensors.insert(tensors.end(), buffers.begin(), buffers.end());
  w.U32(static_cast<std::uint32_t>(tensors.size()));
  for (const auto& t : tensors) {
    w.U32(static_cast<std::uint32_t>(t.name.size()));
    w.Bytes(t.name.data(), t.name.size());
    w.U32(static_cast<std::uint32_t>(t.tensor->rank()));
    for (int d : t.tensor->shape()) w.U32(static_cast<std::uint32_t>(d));
    for (float v : t.tensor->data()) w.F32(v);
  }
  auto& bytes = w.bytes();
  w.U32(Crc32(bytes.data() + 8, bytes.size() - 8));
  return std::move(bytes);
}

Network DeserializeCheckpoint(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw IntegrityError("not a checkpoint: bad magic bytes");
  }
  Reader header(bytes, 4, 8);
  const std::uint32_t version = header.U32();
  if (version != kCheckpointVersion) {
    throw SpecMismatchError("checkpoint format version " + std::to_string(version) +
                            ", this build reads version " +
                            std::to_string(kCheckpointVersion));
  }
  const std::size_t body_end = bytes.size() - 4;
  Reader trailer(bytes, body_end, bytes.size());
  if (trailer.U32() != Crc32(bytes.data() + 8, body_end - 8)) {
    throw IntegrityError("checkpoint CRC mismatch (truncated or corrupted file)");
  }

  Reader r(bytes, 8, body_end);
  NetworkSpec spec;
  spec.input_shape = {static_cast<int>(r.U32()), static_cast<int>(r.U32()),
                      static_cast<int>(r.U32())};
  spec.levels = static_cast<int>(r.U32());
  spec.stages = static_cast<int>(r.U32());
  spec.base_channels = static_cast<int>(r.U32());
  spec.num_classes = static_cast<int>(r.U32());
  const std::uint8_t mode = r.U8();
  if (mode > 1) throw IntegrityError("checkpoint: unknown subband mode");
  spec.subband_mode = mode == 0 ? SubbandMode::kAll : SubbandMode::kDetailOnly;
  const std::uint32_t widths = r.U32();
  if (widths > kMaxLevels + 1) throw IntegrityError("checkpoint: bad stage count");
  for (std::uint32_t i = 0; i < widths; ++i) {
    spec.stage_channels.push_back(static_cast<int>(r.U32()));
  }

  Network net = [&] {
    try {
      return Network(spec);
    } catch (const BuildError& e) {
      throw IntegrityError(std::string("checkpoint holds an invalid spec: ") + e.what());
    }
  }();
  std::map<std::string, Tensor*> slots;
  for (auto& t : net.Parameters()) slots[t.name] = t.tensor;
  for (auto& t : net.Buffers()) slots[t.name] = t.tensor;

  const std::uint32_t count = r.U32();
  if (count != slots.size()) {
    throw SpecMismatchError("checkpoint holds " + std::to_string(count) +
                            " tensors, network expects " + std::to_string(slots.size()));
  }
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::string name = r.String(r.U32());
    const auto it = slots.find(name);
    if (it == slots.end()) throw SpecMismatchError("checkpoint: unexpected tensor " + name);
    Tensor& dst = *it->second;
    const std::uint32_t rank = r.U32();
    Shape shape;
    for (std::uint32_t k = 0; k < rank && k < 8; ++k) shape.push_back(static_cast<int>(r.U32()));
    if (shape != dst.shape()) {
      throw SpecMismatchError("checkpoint: tensor " + name + " has shape " +
                              ShapeToString(shape) + ", expected " +
                              ShapeToString(dst.shape()));
    }
    for (float& v : dst.data()) v = r.F32();
    slots.erase(it);
  }
  if (!r.done()) throw IntegrityError("checkpoint: trailing bytes after tensors");
  return net;
}

void SaveCheckpoint(const Network& net, const std::filesystem::path& path) {
  const auto bytes = SerializeCheckpoint(net);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("cannot write checkpoint " + path.string());
}

Network LoadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path.string());
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                         std::istreambuf_iterator<char>());
  return DeserializeCheckpoint(bytes);
}

Network LoadCheckpoint(const std::filesystem::path& path,
                       const NetworkSpec& expected) {
  Network net = LoadCheckpoint(path);
  if (Resolved(net.spec()) != Resolved(expected)) {
    throw SpecMismatchError(
        "checkpoint " + path.string() + " was written for a different network "
        "(input " + ShapeToString(net.spec().input_shape) + ", levels " +
        std::to_string(net.spec().levels) + ", classes " +
        std::to_string(net.spec().num_classes) + ")");
  }
  return net;
}

}  // namespace wcnn
