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

// Convolution kernels: serial reference versus the OpenMP path, on layer
// shapes from the default network, plus the wavelet pyramid.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "wcnn/kernels.h"
#include "wcnn/wavelet.h"

namespace {

using wcnn::kernels::ConvGeometry;

// Args: batch, channels, spatial extent, stride.
ConvGeometry Geometry(const benchmark::State& state) {
  ConvGeometry g;
  g.batch = static_cast<int>(state.range(0));
  g.in_channels = static_cast<int>(state.range(1));
  g.out_channels = g.in_channels;
  g.in_height = g.in_width = static_cast<int>(state.range(2));
  g.kernel_height = g.kernel_width = 3;
  g.stride = static_cast<int>(state.range(3));
  g.pad_top = g.pad_left = g.pad_bottom = g.pad_right = 1;
  return g;
}

std::vector<float> Random(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<float> u(-1.0f, 1.0f);
  std::vector<float> v(n);
  for (float& x : v) x = u(rng);
  return v;
}

struct Buffers {
  std::vector<float> x, w, b, y, dx, dw, db;
  explicit Buffers(const ConvGeometry& g)
      : x(Random(static_cast<std::size_t>(g.batch) * g.in_channels * g.in_height * g.in_width, 1)),
        w(Random(static_cast<std::size_t>(g.out_channels) * g.in_channels * 9, 2)),
        b(Random(g.out_channels, 3)),
        y(Random(static_cast<std::size_t>(g.batch) * g.out_channels * g.out_height() * g.out_width(), 4)),
        dx(x.size()),
        dw(w.size()),
        db(b.size()) {}
};

void SetFlops(benchmark::State& state, const ConvGeometry& g) {
  const double macs = static_cast<double>(g.batch) * g.out_channels * g.out_height() *
                      g.out_width() * g.in_channels * 9;
  state.counters["GFLOP/s"] =
      benchmark::Counter(2.0 * macs, benchmark::Counter::kIsIterationInvariantRate,
                         benchmark::Counter::OneK::kIs1000);
}

template <bool kReference>
void BM_Forward(benchmark::State& state) {
  const ConvGeometry g = Geometry(state);
  Buffers buf(g);
  for (auto _ : state) {
    if (kReference) {
      wcnn::kernels::reference::Conv2dForward(g, buf.x, buf.w, buf.b, buf.y);
    } else {
      wcnn::kernels::Conv2dForward(g, buf.x, buf.w, buf.b, buf.y);
    }
    benchmark::DoNotOptimize(buf.y.data());
  }
  SetFlops(state, g);
}

template <bool kReference>
void BM_BackwardInput(benchmark::State& state) {
  const ConvGeometry g = Geometry(state);
  Buffers buf(g);
  for (auto _ : state) {
    if (kReference) {
      wcnn::kernels::reference::Conv2dBackwardInput(g, buf.w, buf.y, buf.dx);
    } else {
      wcnn::kernels::Conv2dBackwardInput(g, buf.w, buf.y, buf.dx);
    }
    benchmark::DoNotOptimize(buf.dx.data());
  }
  SetFlops(state, g);
}

template <bool kReference>
void BM_BackwardWeight(benchmark::State& state) {
  const ConvGeometry g = Geometry(state);
  Buffers buf(g);
  for (auto _ : state) {
    if (kReference) {
      wcnn::kernels::reference::Conv2dBackwardWeight(g, buf.x, buf.y, buf.dw, buf.db);
    } else {
      wcnn::kernels::Conv2dBackwardWeight(g, buf.x, buf.y, buf.dw, buf.db);
    }
    benchmark::DoNotOptimize(buf.dw.data());
  }
  SetFlops(state, g);
}

void ConvShapes(benchmark::internal::Benchmark* b) {
  b->ArgNames({"batch", "channels", "size", "stride"});
  b->Args({32, 32, 64, 1});
  b->Args({32, 64, 32, 1});
  b->Args({32, 128, 8, 2});
  b->Unit(benchmark::kMillisecond);
}

BENCHMARK(BM_Forward<true>)->Name("conv_forward/reference")->Apply(ConvShapes);
BENCHMARK(BM_Forward<false>)->Name("conv_forward/openmp")->Apply(ConvShapes);
BENCHMARK(BM_BackwardInput<true>)->Name("conv_backward_input/reference")->Apply(ConvShapes);
BENCHMARK(BM_BackwardInput<false>)->Name("conv_backward_input/openmp")->Apply(ConvShapes);
BENCHMARK(BM_BackwardWeight<true>)->Name("conv_backward_weight/reference")->Apply(ConvShapes);
BENCHMARK(BM_BackwardWeight<false>)->Name("conv_backward_weight/openmp")->Apply(ConvShapes);

void BM_Decompose(benchmark::State& state) {
  const int size = static_cast<int>(state.range(0));
  const wcnn::Tensor image({3, size, size}, Random(3u * size * size, 5));
  const wcnn::WaveletFilterPair haar = wcnn::Haar();
  for (auto _ : state) {
    benchmark::DoNotOptimize(wcnn::Decompose(image, haar, 4));
  }
}
BENCHMARK(BM_Decompose)->Name("haar_decompose_4_levels")->Arg(64)->Arg(224);

}  // namespace

BENCHMARK_MAIN();
