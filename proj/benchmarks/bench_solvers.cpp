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

#include <random>

#include "lqdec/factorize.hpp"
#include "lqdec/generators.hpp"
#include "lqdec/lq.hpp"
#include "lqdec/mckp.hpp"
#include "lqdec/sweep.hpp"

namespace {

using namespace lqdec;

void BM_SvdTruncated(benchmark::State& state) {
  const DenseMatrix a = gen_matrix(MatrixKind::decaying_spectrum, 512, 512, 1);
  SvdOptions o;
  o.method = state.range(0) == 0 ? SvdMethod::exact : SvdMethod::randomized;
  for (auto _ : state) benchmark::DoNotOptimize(svd_truncated(a, 64, o));
  state.SetLabel(std::string(to_string(o.method)));
}
BENCHMARK(BM_SvdTruncated)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_LqDecompose(benchmark::State& state) {
  const DenseMatrix w = gen_matrix(MatrixKind::gaussian, 512, 512, 2);
  LqOptions o;
  o.config = parse_quant_config("3,8,fp32,64,256");
  o.rank = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(lq_decompose(w, nullptr, o));
}
BENCHMARK(BM_LqDecompose)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

// A default-grid allocation over a few hundred matrices, as in a full model.
void BM_SolveMckp(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const ConfigGrid grid = ConfigGrid::default_grid();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> noise(0.8, 1.2);
  MckpInstance inst;
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t size = 4096 * static_cast<std::int64_t>(1 + rng() % 4);
    std::vector<double> cost;
    std::vector<Rational> weight;
    for (const auto& c : grid.configs()) {
      const Rational bits = storage_bits_per_param(c);
      cost.push_back(static_cast<double>(size) * std::exp2(-2.0 * bits.to_double()) * noise(rng));
      weight.push_back(Rational(size) * bits);
    }
    inst.cost.push_back(std::move(cost));
    inst.weight.push_back(std::move(weight));
  }
  const double budget = 2.75 * [&] {
    double total = 0;
    for (const auto& row : inst.weight) total += (row[0] / storage_bits_per_param(grid[0])).to_double();
    return total;
  }();
  for (auto _ : state) benchmark::DoNotOptimize(solve_mckp(inst, budget));
}
BENCHMARK(BM_SolveMckp)->Arg(32)->Arg(224)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
