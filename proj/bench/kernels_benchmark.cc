// Copyright 2026 The iraug Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serial reference kernels against their OpenMP counterparts, plus one
// batch of masked-LM gradients accumulated serially and in parallel.

#include <benchmark/benchmark.h>

#include <random>

#include "iraug/encoder.h"
#include "iraug/kernels.h"
#include "iraug/mlm.h"

namespace iraug {
namespace {

Matrix<float> RandomMatrix(int rows, int cols, uint64_t seed) {
  Matrix<float> m(rows, cols);
  Rng rng(seed);
  std::normal_distribution<float> normal(0.0f, 1.0f);
  for (float& x : m.data) x = normal(rng);
  return m;
}

void BM_MatMulReference(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto a = RandomMatrix(n, n, 1), b = RandomMatrix(n, n, 2);
  Matrix<float> c;
  for (auto _ : state) {
    kernels::reference::MatMul(a, b, c);
    benchmark::DoNotOptimize(c.data.data());
  }
  state.SetItemsProcessed(state.iterations() * int64_t{n} * n * n);
}

void BM_MatMulOpenMP(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto a = RandomMatrix(n, n, 1), b = RandomMatrix(n, n, 2);
  Matrix<float> c;
  for (auto _ : state) {
    kernels::MatMul(a, b, c);
    benchmark::DoNotOptimize(c.data.data());
  }
  state.SetItemsProcessed(state.iterations() * int64_t{n} * n * n);
}

void BM_MatMulBtReference(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto a = RandomMatrix(n, n, 3), b = RandomMatrix(n, n, 4);
  Matrix<float> c;
  for (auto _ : state) {
    kernels::reference::MatMulBt(a, b, c);
    benchmark::DoNotOptimize(c.data.data());
  }
}

void BM_MatMulBtOpenMP(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto a = RandomMatrix(n, n, 3), b = RandomMatrix(n, n, 4);
  Matrix<float> c;
  for (auto _ : state) {
    kernels::MatMulBt(a, b, c);
    benchmark::DoNotOptimize(c.data.data());
  }
}

void BM_MlmBatchGradient(benchmark::State& state) {
  const bool parallel = state.range(0) != 0;
  ModelConfig config;
  config.n_layers = 2;
  config.d_model = 64;
  config.d_ff = 256;
  config.vocab_size = 200;
  config.dropout = 0.0;
  const Model<float> model(config);
  std::vector<std::vector<TokenId>> batch;
  Rng rng(7);
  for (int i = 0; i < 32; ++i) {
    std::vector<TokenId> ids;
    for (int t = 0; t < 10; ++t) ids.push_back(static_cast<TokenId>(3 + UniformIndex(rng, 197)));
    batch.push_back(ids);
  }
  GradientAccumulator<float> acc(model.params);
  for (auto _ : state) {
    const double loss = acc.Run(
        batch.size(),
        [&](size_t i, Params<float>& g) {
          std::vector<TokenId> masked = batch[i];
          const TokenId target = masked[4];
          masked[4] = Vocabulary::kMask;
          return static_cast<double>(MlmExampleLoss<float>(model, masked, 4, target, nullptr, &g));
        },
        parallel);
    benchmark::DoNotOptimize(loss);
  }
}

BENCHMARK(BM_MatMulReference)->Arg(64)->Arg(256);
BENCHMARK(BM_MatMulOpenMP)->Arg(64)->Arg(256);
BENCHMARK(BM_MatMulBtReference)->Arg(64)->Arg(256);
BENCHMARK(BM_MatMulBtOpenMP)->Arg(64)->Arg(256);
BENCHMARK(BM_MlmBatchGradient)->Arg(0)->Arg(1)->ArgNames({"parallel"});

}  // namespace
}  // namespace iraug

BENCHMARK_MAIN();
