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

#include "wcnn/tensor.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wcnn/error.h"

namespace wcnn {

std::size_t NumElements(const Shape& shape) {
  std::size_t n = 1;
  for (int d : shape) {
    if (d < 0) throw ShapeError("negative extent in " + ShapeToString(shape));
    n *= static_cast<std::size_t>(d);
  }
  return n;
}

std::string ShapeToString(const Shape& shape) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out << 'x';
    out << shape[i];
  }
  out << ']';
  return out.str();
}

Tensor::Tensor(Shape shape, float fill)
    : shape_(std::move(shape)), data_(NumElements(shape_), fill) {}

Tensor::Tensor(Shape shape, std::vector<float> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (NumElements(shape_) != data_.size()) {
    throw ShapeError("shape " + ShapeToString(shape_) + " does not match " +
                     std::to_string(data_.size()) + " elements");
  }
}

int Tensor::dim(int axis) const {
  const int r = rank();
  if (axis < 0) axis += r;
  if (axis < 0 || axis >= r) {
    throw ArgumentError("axis out of range for " + ShapeToString(shape_));
  }
  return shape_[axis];
}

std::size_t Tensor::Offset(std::initializer_list<int> index) const {
  if (static_cast<int>(index.size()) != rank()) {
    throw ArgumentError("index rank does not match " + ShapeToString(shape_));
  }
  std::size_t offset = 0;
  int axis = 0;
  for (int i : index) {
    if (i < 0 || i >= shape_[axis]) {
      throw ArgumentError("index out of range for " + ShapeToString(shape_));
    }
    offset = offset * shape_[axis] + i;
    ++axis;
  }
  return offset;
}

float& Tensor::at(std::initializer_list<int> index) {
  return data_[Offset(index)];
}

float Tensor::at(std::initializer_list<int> index) const {
  return data_[Offset(index)];
}

Tensor Tensor::Reshaped(Shape shape) const {
  if (NumElements(shape) != data_.size()) {
    throw ShapeError("cannot reshape " + ShapeToString(shape_) + " to " +
                     ShapeToString(shape));
  }
  return Tensor(std::move(shape), data_);
}

std::span<float> Tensor::grad() {
  if (grad_.size() != data_.size()) grad_.assign(data_.size(), 0.0f);
  return grad_;
}

void Tensor::ZeroGrad() {
  if (!grad_.empty()) std::fill(grad_.begin(), grad_.end(), 0.0f);
}

bool Tensor::AllFinite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](float v) { return std::isfinite(v); });
}

}  // namespace wcnn
