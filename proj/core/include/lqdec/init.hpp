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

#ifndef LQDEC_INIT_HPP
#define LQDEC_INIT_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "lqdec/lq.hpp"
#include "lqdec/mckp.hpp"
#include "lqdec/sweep.hpp"

namespace lqdec {

struct InitOptions {
  SweepOptions sweep;
  /// Average storage budget per quantized parameter.
  double budget_bits_per_param = 3.0;
  MckpOptions mckp;
};

struct InitResult {
  SweepTable table;
  AllocSolution solution;
  /// Final decomposition of each matrix under its assigned config.
  std::vector<LqResult> decompositions;
};

/// Sweep every (matrix, config) pair, solve the allocation under
/// budget_bits_per_param * total parameters, then decompose each matrix
/// once more with its assigned config.
InitResult lq_lora_init(std::span<const DenseMatrix> matrices, std::span<const FisherDiag> fishers,
                        const ConfigGrid& grid, const InitOptions& opts, const SweepTable* resume = nullptr);

/// Budget in bits for an average rate over all matrices of a table.
double budget_bits_for(const SweepTable& table, double bits_per_param);

}  // namespace lqdec

#endif  // LQDEC_INIT_HPP
