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

#ifndef WCNN_TENSOR_H_
#define WCNN_TENSOR_H_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace wcnn {

using Shape = std::vector<int>;

std::size_t NumElements(const Shape& shape);
std::string ShapeToString(const Shape& shape);

// Dense row-major float32 array with an optional same-shape gradient buffer.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape, float fill = 0.0f);
  Tensor(Shape shape, std::vector<float> data);

  const Shape& shape() const { return shape_; }
  int rank() const { return static_cast<int>(shape_.size()); }
  // Negative indices count from the back.
  int dim(int axis) const;
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  std::span<float> data() { return data_; }
  std::span<const float> data() const { return data_; }
  float& operator[](std::size_t i) { return data_[i]; }
  float operator[](std::size_t i) const { return data_[i]; }

  // Multi-index access; the index count must equal rank().
  float& at(std::initializer_list<int> index);
  float at(std::initializer_list<int> index) const;

  // Same data viewed with another shape of equal element count.
  Tensor Reshaped(Shape shape) const;

  bool has_grad() const { return !grad_.empty(); }
  // Allocates a zeroed gradient on first use.
  std::span<float> grad();
  std::span<const float> grad() const { return grad_; }
  void ZeroGrad();
  void DropGrad() { grad_.clear(); grad_.shrink_to_fit(); }

  bool AllFinite() const;

  friend bool operator==(const Tensor& a, const Tensor& b) {
    return a.shape_ == b.shape_ && a.data_ == b.data_;
  }

 private:
  std::size_t Offset(std::initializer_list<int> index) const;

  Shape shape_;
  std::vector<float> data_;
  std::vector<float> grad_;
};

}  // namespace wcnn

#endif  // WCNN_TENSOR_H_
