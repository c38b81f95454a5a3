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

#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.h"
#include "wcnn/error.h"
#include "wcnn/ops.h"

namespace wcnn {
namespace {

using testing::MaxAbsDiff;
using testing::RandomTensor;

TEST_CASE("conv2d: 1x1 identity kernel reproduces the input") {
  const Tensor x({1, 2, 2}, {1, 2, 3, 4});
  const Tensor y = Conv2d(x, Tensor({1, 1, 1, 1}, 1.0f), Tensor({1}), 1, 0);
  CHECK(y == x);
}

TEST_CASE("conv2d: pairwise average at stride 2") {
  const Tensor x({1, 1, 4}, {1, 3, 5, 7});
  const Tensor w({1, 1, 1, 2}, {0.5f, 0.5f});
  const Tensor y = Conv2d(x, w, Tensor(), 2, 0);
  CHECK(y.shape() == Shape{1, 1, 2});
  CHECK(y[0] == 2.0f);
  CHECK(y[1] == 6.0f);
}

TEST_CASE("conv2d: random 3x8x8 input against the direct oracle") {
  const Tensor x = RandomTensor({3, 8, 8}, 21);
  const Tensor w = RandomTensor({4, 3, 3, 3}, 22);
  const Tensor b = RandomTensor({4}, 23);
  const Tensor y = Conv2d(x, w, b, 1, 1);
  CHECK(y.shape() == Shape{4, 8, 8});
  const auto oracle = testing::DirectConv2d(x.Reshaped({1, 3, 8, 8}), w, b, 1, Padding::Symmetric(1));
  CHECK(MaxAbsDiff(y.data(), oracle) < 1e-5);
}

TEST_CASE("conv2d: stride 1 with pad (k-1)/2 preserves spatial shape") {
  for (int k : {1, 3, 5, 7}) {
    const Tensor y = Conv2d(Tensor({2, 3, 9, 11}), Tensor({5, 3, k, k}), Tensor(), 1, (k - 1) / 2);
    CHECK(y.shape() == Shape{2, 5, 9, 11});
  }
}

TEST_CASE("conv2d: argument and shape errors") {
  const Tensor x({3, 8, 8});
  CHECK_THROWS_AS(Conv2d(x, Tensor({4, 2, 3, 3}), Tensor(), 1, 1), ShapeError);
  CHECK_THROWS_AS(Conv2d(x, Tensor({4, 3, 3, 3}), Tensor(), 0, 1), ArgumentError);
  CHECK_THROWS_AS(Conv2d(x, Tensor({4, 3, 3, 3}), Tensor(), -1, 1), ArgumentError);
  CHECK_THROWS_AS(Conv2d(x, Tensor({4, 3, 3, 3}), Tensor({3}), 1, 1), ShapeError);
  CHECK_THROWS_AS(Conv2d(x, Tensor({4, 3, 11, 11}), Tensor(), 1, 1), ShapeError);
  CHECK_THROWS_AS(Conv2d(x, Tensor({4, 3, 3, 3}), Tensor(), 1, -1), ArgumentError);
}

TEST_CASE("downsample: definition, identity and index arithmetic") {
  const Tensor line({1, 4}, {1, 2, 3, 4});
  const Tensor d = Downsample(line.Reshaped({1, 1, 4}).Reshaped({1, 4}), 1);
  CHECK(d == line);
  const Tensor row({2, 4}, {1, 2, 3, 4, 5, 6, 7, 8});
  const Tensor r = Downsample(row, 2);
  CHECK(r.shape() == Shape{1, 2});
  CHECK(r[0] == 1.0f);
  CHECK(r[1] == 3.0f);

  Tensor ramp({4, 4});
  for (int i = 0; i < 16; ++i) ramp[i] = static_cast<float>(i);
  const Tensor q = Downsample(ramp, 2);
  CHECK(q.shape() == Shape{2, 2});
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(q.at({i, j}) == ramp.at({2 * i, 2 * j}));
}

TEST_CASE("downsample: composition law p=2 twice equals p=4") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Tensor x = RandomTensor({2, 3, 16, 24}, seed);
    CHECK(Downsample(Downsample(x, 2), 2) == Downsample(x, 4));
  }
}

TEST_CASE("downsample: non-divisible extent is an argument error") {
  CHECK_THROWS_AS(Downsample(Tensor({3, 5, 4}), 2), ArgumentError);
  CHECK_THROWS_AS(Downsample(Tensor({3, 4, 4}), 0), ArgumentError);
}

TEST_CASE("avg_pool equals uniform-kernel conv-pool") {
  for (int p : {2, 4}) {
    const Tensor x = RandomTensor({2, 3, 8, 8}, 40 + p);
    const Tensor a = AvgPool(x, p);
    const Tensor b = ConvPool(x, UniformKernel(3, p), Tensor(), p);
    CHECK(a.shape() == Shape{2, 3, 8 / p, 8 / p});
    CHECK(MaxAbsDiff(a.data(), b.data()) < 1e-6);
  }
}

TEST_CASE("relu and linear") {
  const Tensor r = Relu(Tensor({3}, {-1, 0, 2}));
  CHECK(r == Tensor({3}, {0, 0, 2}));
  const Tensor w({2, 3}, {1, 2, 3, -1, 0, 1});
  const Tensor y = Linear(Tensor({3}, {1, 1, 2}), w, Tensor({2}, {0.5f, 0}));
  CHECK(y == Tensor({2}, {9.5f, 1.0f}));
  const Tensor yb = Linear(Tensor({2, 3}, {1, 1, 2, 0, 0, 0}), w, Tensor({2}, {0.5f, 0}));
  CHECK(yb == Tensor({2, 2}, {9.5f, 1.0f, 0.5f, 0.0f}));
  CHECK_THROWS_AS(Linear(Tensor({4}), w, Tensor({2})), ShapeError);
}

TEST_CASE("energy layer: mean of each map") {
  CHECK(Energy(Tensor({1, 1, 3, 3}, 5.0f))[0] == 5.0f);
  const Tensor e = Energy(Tensor({1, 1, 2, 2}, {1, 3, 5, 7}));
  CHECK(e.shape() == Shape{1, 1});
  CHECK(e[0] == 4.0f);
}

TEST_CASE("energy layer equals uniform conv-pool over the whole map") {
  const Tensor x = RandomTensor({3, 4, 8, 8}, 77);
  const Tensor e = Energy(x);
  const Tensor p = ConvPool(x, UniformKernel(4, 8), Tensor(), 8);
  CHECK(p.shape() == Shape{3, 4, 1, 1});
  CHECK(MaxAbsDiff(e.data(), p.data()) < 1e-6);
}

TEST_CASE("concat along channels keeps order") {
  const Tensor a({1, 1, 1, 2}, {1, 2});
  const Tensor b({1, 2, 1, 2}, {3, 4, 5, 6});
  const Tensor* parts[] = {&a, &b};
  CHECK(ConcatChannels(parts) == Tensor({1, 3, 1, 2}, {1, 2, 3, 4, 5, 6}));
  const Tensor c({1, 1, 2, 2});
  const Tensor* bad[] = {&a, &c};
  CHECK_THROWS_AS(ConcatChannels(bad), ShapeError);
}

TEST_CASE("softmax cross-entropy") {
  const int zero[] = {0};
  CHECK(SoftmaxCrossEntropy(Tensor({1, 2}, {0, 0}), zero) == doctest::Approx(std::log(2.0)));
  const int labels[] = {2, 0};
  const Tensor logits({2, 3}, {1, 2, 3, 1000, 0, -1000});
  const double expect = (std::log(std::exp(1.0) + std::exp(2.0) + std::exp(3.0)) - 3.0 + 0.0) / 2;
  CHECK(SoftmaxCrossEntropy(logits, labels) == doctest::Approx(expect));
  const int out_of_range[] = {3};
  CHECK_THROWS_AS(SoftmaxCrossEntropy(Tensor({1, 3}), out_of_range), ArgumentError);
}

TEST_CASE("batchnorm: batch statistics normalize to mean 0 variance 1") {
  // Channel values with mean 5 and variance 4.
  Tensor x({4, 2, 1, 1}, {3, 0, 7, 1, 3, 2, 7, 3});
  Tensor gamma({2}, 1.0f), beta({2}, 0.0f);
  Tensor rm({2}, 0.0f), rv({2}, 1.0f);
  const Tensor y = BatchNorm(x, gamma, beta, {&rm, &rv}, true);
  double mean = 0.0, var = 0.0;
  for (int b = 0; b < 4; ++b) mean += y.at({b, 0, 0, 0});
  mean /= 4;
  for (int b = 0; b < 4; ++b) var += (y.at({b, 0, 0, 0}) - mean) * (y.at({b, 0, 0, 0}) - mean);
  var /= 4;
  CHECK(std::fabs(mean) < 1e-6);
  CHECK(var == doctest::Approx(4.0 / (4.0 + 1e-5)).epsilon(1e-6));
  // Running averages: momentum 0.9, unbiased variance.
  CHECK(rm[0] == doctest::Approx(0.5));
  CHECK(rv[0] == doctest::Approx(0.9 + 0.1 * 16.0 / 3.0));
}

TEST_CASE("batchnorm: inference uses running statistics") {
  Tensor x({2, 1, 1, 1}, {2, 4});
  Tensor gamma({1}, 2.0f), beta({1}, 1.0f);
  Tensor rm({1}, 1.0f), rv({1}, 4.0f);
  const Tensor y = BatchNorm(x, gamma, beta, {&rm, &rv}, false);
  CHECK(y[0] == doctest::Approx(2.0 * 1.0 / std::sqrt(4.0 + 1e-5) + 1.0));
  CHECK(rm[0] == 1.0f);
}

TEST_CASE("batchnorm: a batch of one in training mode is rejected") {
  Tensor gamma({3}, 1.0f), beta({3}), rm({3}), rv({3}, 1.0f);
  CHECK_THROWS_AS(BatchNorm(Tensor({1, 3, 4, 4}), gamma, beta, {&rm, &rv}, true), ArgumentError);
  CHECK_NOTHROW(BatchNorm(Tensor({1, 3, 4, 4}), gamma, beta, {&rm, &rv}, false));
}

}  // namespace
}  // namespace wcnn
