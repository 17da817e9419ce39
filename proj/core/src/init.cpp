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

#include "lqdec/init.hpp"

#include "lqdec/error.hpp"

namespace lqdec {

double budget_bits_for(const SweepTable& table, double bits_per_param) {
  if (!(bits_per_param > 0.0)) throw ArgumentError("budget must be positive bits per parameter");
  long double total = 0;
  for (auto s : table.sizes) total += static_cast<long double>(s);
  return static_cast<double>(total * bits_per_param);
}

InitResult lq_lora_init(std::span<const DenseMatrix> matrices, std::span<const FisherDiag> fishers,
                        const ConfigGrid& grid, const InitOptions& opts, const SweepTable* resume) {
  InitResult out;
  out.table = sweep(matrices, fishers, grid, opts.sweep, resume);
  out.solution = solve_mckp(out.table, budget_bits_for(out.table, opts.budget_bits_per_param), opts.mckp);
  out.decompositions.reserve(matrices.size());
  for (std::size_t i = 0; i < matrices.size(); ++i) {
    const FisherDiag* f = fishers.empty() ? nullptr : &fishers[i];
    out.decompositions.push_back(
        lq_decompose(matrices[i], f, cell_options(opts.sweep, grid[out.solution.assignment[i]])));
  }
  return out;
}

}  // namespace lqdec
