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

#include "lqdec/bitpack.hpp"
#include "lqdec/generators.hpp"
#include "lqdec/nf_quant.hpp"

namespace {

using namespace lqdec;

void BM_QuantizeNf(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const QuantConfig cfg{static_cast<int>(state.range(1)), 8, FloatFormat::fp32, 64, 256};
  const DenseMatrix w = gen_matrix(MatrixKind::gaussian, n, n, 1);
  for (auto _ : state) benchmark::DoNotOptimize(quantize_nf(w, cfg));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * w.size()));
}
BENCHMARK(BM_QuantizeNf)->ArgsProduct({{256, 1024}, {2, 3, 4, 8}})->Unit(benchmark::kMillisecond);

void BM_Dequantize(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const QuantizedMatrix q = quantize_nf(gen_matrix(MatrixKind::gaussian, n, n, 2), kNf4Config);
  for (auto _ : state) benchmark::DoNotOptimize(dequantize(q));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * q.size()));
}
BENCHMARK(BM_Dequantize)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_PackUnpack(benchmark::State& state) {
  const int bits = static_cast<int>(state.range(0));
  std::vector<std::uint8_t> codes(1 << 20);
  for (std::size_t i = 0; i < codes.size(); ++i) codes[i] = static_cast<std::uint8_t>((i * 2654435761u) & ((1u << bits) - 1));
  for (auto _ : state) {
    const auto bytes = pack_bits<std::uint8_t>(codes, bits);
    benchmark::DoNotOptimize(unpack_bits(bytes, bits, codes.size()));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * codes.size()));
}
BENCHMARK(BM_PackUnpack)->Arg(2)->Arg(3)->Arg(4)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
