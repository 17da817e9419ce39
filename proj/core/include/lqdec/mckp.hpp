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

#ifndef LQDEC_MCKP_HPP
#define LQDEC_MCKP_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "lqdec/rational.hpp"
#include "lqdec/sweep.hpp"

namespace lqdec {

/// Multiple-choice knapsack: pick one item per class, minimize total cost
/// subject to total weight <= budget.
struct MckpInstance {
  std::vector<std::vector<double>> cost;
  std::vector<std::vector<Rational>> weight;

  std::size_t num_classes() const noexcept { return cost.size(); }
  void validate() const;
};

MckpInstance to_instance(const SweepTable& table);

struct AllocSolution {
  /// Chosen config index per matrix.
  std::vector<std::size_t> assignment;
  /// Sum of the selected costs, accumulated in class order.
  double total_error = 0.0;
  Rational total_storage_bits;
  double budget_bits = 0.0;
  /// True when the search proved optimality.
  bool optimal = false;
  /// Branch-and-bound nodes expanded (0 for brute force).
  std::uint64_t nodes = 0;
};

struct MckpOptions {
  /// Drop items dominated in (cost, weight) before searching.
  bool prune_dominated = true;
  /// Give up (optimal = false, best incumbent returned) after this many nodes.
  std::uint64_t node_limit = 200'000'000;
};

/// Exact solver: dominance pruning, then depth-first branch and bound with
/// the LP-relaxation lower bound and a greedy LP-rounding incumbent.
/// Throws InfeasibleError when even the cheapest choices exceed the budget.
AllocSolution solve_mckp(const MckpInstance& inst, double budget_bits, const MckpOptions& opts = {});
AllocSolution solve_mckp(const SweepTable& table, double budget_bits, const MckpOptions& opts = {});

/// Exhaustive enumeration, for testing. Throws ArgumentError when the number
/// of assignments exceeds 10^7.
AllocSolution brute_force_mckp(const MckpInstance& inst, double budget_bits);
AllocSolution brute_force_mckp(const SweepTable& table, double budget_bits);

/// Sum of the smallest weight in each class.
Rational min_total_weight(const MckpInstance& inst);

}  // namespace lqdec

#endif  // LQDEC_MCKP_HPP
