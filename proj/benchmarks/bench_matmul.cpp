/*
 * Copyright 2026 The lqdec Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <benchmark/benchmark.h>

#include "lqdec/factorize.hpp"
#include "lqdec/generators.hpp"
#include "lqdec/matmul.hpp"
#include "lqdec/nf_quant.hpp"

namespace {

using namespace lqdec;

constexpr std::size_t kDim = 1024;
constexpr std::size_t kRank = 64;

struct Fixture {
  QuantizedMatrix q;
  DenseMatrix dense;
  LowRankFactors factors;

  Fixture()
      : q(quantize_nf(gen_matrix(MatrixKind::gaussian, kDim, kDim, 1), kNf4Config)),
        dense(dequantize(q)),
        factors{gen_matrix(MatrixKind::gaussian, kDim, kRank, 2), gen_matrix(MatrixKind::gaussian, kRank, kDim, 3)} {}
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

void BM_MatmulDequant(benchmark::State& state) {
  const auto& f = fixture();
  const DenseMatrix x = gen_matrix(MatrixKind::gaussian, static_cast<std::size_t>(state.range(0)), kDim, 4);
  for (auto _ : state) benchmark::DoNotOptimize(matmul_dequant(x, f.q, &f.factors));
}
BENCHMARK(BM_MatmulDequant)->RangeMultiplier(4)->Range(1, 256)->Unit(benchmark::kMillisecond);

void BM_MatmulDense(benchmark::State& state) {
  const auto& f = fixture();
  const DenseMatrix x = gen_matrix(MatrixKind::gaussian, static_cast<std::size_t>(state.range(0)), kDim, 4);
  for (auto _ : state) benchmark::DoNotOptimize(matmul_dense(x, f.dense, &f.factors));
}
BENCHMARK(BM_MatmulDense)->RangeMultiplier(4)->Range(1, 256)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
